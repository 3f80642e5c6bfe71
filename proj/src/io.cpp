#include "symdyn/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "symdyn/errors.hpp"

namespace symdyn::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad field '") + key + "': " + e.what());
  }
}

std::shared_ptr<const Window> window_from(const json& j, std::size_t ball_cap) {
  auto group = GroupModel::parse(field<std::string>(j, "group")).with_ball_cap(ball_cap);
  return Window::make(group, field<std::size_t>(j, "radius"));
}

}  // namespace

json to_json(const WindowConfig& x) {
  const auto& w = x.window();
  json cells = json::array();
  for (std::size_t i = 0; i < w.size(); ++i) {
    cells.push_back({w.group().format(w.element(i)), x.at(i)});
  }
  return {{"group", w.group().spec()},
          {"radius", w.radius()},
          {"alphabet", x.alphabet_size()},
          {"cells", std::move(cells)}};
}

WindowConfig config_from_json(const json& j, std::size_t ball_cap) {
  auto window = window_from(j, ball_cap);
  auto alphabet = j.contains("alphabet") ? field<Symbol>(j, "alphabet") : Symbol{2};
  const auto& cells = j.at("cells");
  std::vector<Symbol> symbols(window->size(), 0);
  std::vector<char> seen(window->size(), 0);
  for (const auto& cell : cells) {
    auto g = window->group().parse_element(cell.at(0).get<std::string>());
    auto idx = window->find(g);
    if (!idx) throw InputError("cell " + cell.at(0).get<std::string>() + " outside the window");
    if (seen[*idx]) throw InputError("cell " + cell.at(0).get<std::string>() + " repeated");
    seen[*idx] = 1;
    symbols[*idx] = cell.at(1).get<Symbol>();
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InputError("configuration does not cover the window");
  }
  return {std::move(window), alphabet, std::move(symbols)};
}

json to_json(const GroupModel& group, const Pattern& p) {
  json cells = json::array();
  std::size_t radius = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cells.push_back({group.format(p.support()[i]), p.symbols()[i]});
    radius = std::max(radius, group.length(p.support()[i]));
  }
  return {{"group", group.spec()}, {"radius", radius}, {"cells", std::move(cells)}};
}

Pattern pattern_from_json(const json& j, const GroupModel& group) {
  std::vector<std::pair<Element, Symbol>> cells;
  for (const auto& cell : j.at("cells")) {
    cells.emplace_back(group.parse_element(cell.at(0).get<std::string>()),
                       cell.at(1).get<Symbol>());
  }
  return {group, std::move(cells)};
}

namespace {

const char* kind_name(EventPredicate::Kind k) {
  switch (k) {
    case EventPredicate::Kind::halves_equal:
      return "halves_equal";
    case EventPredicate::Kind::all_equal:
      return "all_equal";
    case EventPredicate::Kind::forbidden:
      return "forbidden";
  }
  return "";
}

EventPredicate predicate_from(const json& j) {
  EventPredicate p;
  auto kind = field<std::string>(j, "kind");
  if (kind == "halves_equal") {
    p.kind = EventPredicate::Kind::halves_equal;
  } else if (kind == "all_equal") {
    p.kind = EventPredicate::Kind::all_equal;
  } else if (kind == "forbidden") {
    p.kind = EventPredicate::Kind::forbidden;
    p.patterns = field<std::vector<std::vector<Symbol>>>(j, "patterns");
  } else {
    throw InputError("unknown predicate kind '" + kind + "'");
  }
  return p;
}

}  // namespace

json to_json(const LLLInstance& inst) {
  json vars = json::array();
  for (std::size_t v = 0; v < inst.variable_count(); ++v) {
    vars.push_back({{"name", inst.variable_names[v]}, {"alphabet", inst.alphabet[v]}});
  }
  json events = json::array();
  for (const auto& e : inst.events) {
    json pred = {{"kind", kind_name(e.violated.kind)}};
    if (e.violated.kind == EventPredicate::Kind::forbidden) pred["patterns"] = e.violated.patterns;
    events.push_back({{"id", e.id},
                      {"label", e.label},
                      {"level", e.level},
                      {"support", e.support},
                      {"mu", to_string(e.probability)},
                      {"x", e.weight.to_string()},
                      {"predicate", std::move(pred)}});
  }
  return {{"variables", std::move(vars)}, {"events", std::move(events)}, {"warnings", inst.warnings}};
}

LLLInstance instance_from_json(const json& j) {
  LLLInstance inst;
  for (const auto& v : j.at("variables")) {
    inst.variable_names.push_back(v.value("name", "v" + std::to_string(inst.variable_names.size())));
    inst.alphabet.push_back(field<Symbol>(v, "alphabet"));
  }
  for (const auto& e : j.at("events")) {
    BadEvent ev;
    ev.id = field<std::size_t>(e, "id");
    ev.label = e.value("label", std::string{});
    ev.level = e.value("level", 1);
    ev.support = field<std::vector<std::size_t>>(e, "support");
    ev.probability = parse_rational(field<std::string>(e, "mu"));
    ev.weight = QSqrt2::parse(field<std::string>(e, "x"));
    ev.violated = e.contains("predicate") ? predicate_from(e.at("predicate")) : EventPredicate{};
    inst.events.push_back(std::move(ev));
  }
  if (j.contains("warnings")) inst.warnings = j.at("warnings").get<std::vector<std::string>>();
  validate(inst);
  return inst;
}

json to_json(const LLLInstance& inst, const Verdict& v) {
  json events = json::array();
  for (std::size_t i = 0; i < v.margins.size(); ++i) {
    const auto& m = v.margins[i];
    const auto& e = inst.events[i];
    events.push_back({{"id", m.id},
                      {"label", e.label},
                      {"mu", to_string(e.probability)},
                      {"x", e.weight.to_string()},
                      {"neighbors", m.neighbors},
                      {"margin", m.margin.to_string()},
                      {"margin_approx", m.margin.to_double()}});
  }
  return {{"holds", v.holds}, {"events", std::move(events)}};
}

json to_json(const ResampleRun& run, std::uint64_t seed) {
  return {{"seed", seed}, {"resamples", run.trace.size()}, {"trace", run.trace}};
}

json to_json(const GroupModel& group, const TSets& tsets) {
  json levels = json::array();
  for (std::size_t i = 1; i <= tsets.levels(); ++i) {
    const auto& e = tsets.level(i);
    json set = json::array();
    std::size_t radius = 0;
    for (const auto& t : e.set) {
      set.push_back(group.format(t));
      radius = std::max(radius, group.length(t));
    }
    levels.push_back({{"i", i}, {"shift", group.format(e.shift)}, {"radius", radius}, {"set", std::move(set)}});
  }
  return {{"c", tsets.c}, {"levels", std::move(levels)}};
}

json to_json(const CoveringForest& forest) {
  const auto& w = forest.window();
  const auto& g = w.group();
  json levels = json::array();
  for (std::size_t n = 1; n <= forest.height(); ++n) {
    json centers = json::array();
    for (auto c : forest.centers(n)) centers.push_back(g.format(w.element(c)));
    json parent = json::array();
    for (auto c : forest.centers(n - 1)) {
      parent.push_back({g.format(w.element(c)), g.format(w.element(forest.step_parent(n - 1, c)))});
    }
    json edges = json::array();
    for (auto c : forest.centers(n)) {
      for (auto d : forest.level(n).graph[c]) {
        if (w.rank(c) < w.rank(d)) edges.push_back({g.format(w.element(c)), g.format(w.element(d))});
      }
    }
    levels.push_back({{"level", n},
                      {"centers", std::move(centers)},
                      {"parent", std::move(parent)},
                      {"edges", std::move(edges)}});
  }
  return {{"group", g.spec()},
          {"radius", w.radius()},
          {"height", forest.height()},
          {"levels", std::move(levels)}};
}

CoveringForest forest_from_json(const json& j, std::size_t ball_cap) {
  auto window = window_from(j, ball_cap);
  const auto size = window->size();
  const auto& g = window->group();
  auto idx = [&](const json& word) { return window->index_of(g.parse_element(word.get<std::string>())); };

  std::vector<ForestLevel> levels;
  ForestLevel base;
  base.centers = window->canonical_order();
  base.leaf_parent.resize(size);
  std::iota(base.leaf_parent.begin(), base.leaf_parent.end(), std::size_t{0});
  base.graph = window->adjacency();
  levels.push_back(std::move(base));

  auto height = field<std::size_t>(j, "height");
  const auto& jl = j.at("levels");
  if (jl.size() != height) throw InputError("forest height does not match its levels");
  for (const auto& lv : jl) {
    ForestLevel next;
    for (const auto& c : lv.at("centers")) next.centers.push_back(idx(c));
    std::vector<std::size_t> step(size, SIZE_MAX);
    for (const auto& p : lv.at("parent")) step[idx(p.at(0))] = idx(p.at(1));
    const auto& prev = levels.back();
    next.leaf_parent.resize(size);
    for (std::size_t h = 0; h < size; ++h) {
      auto s = step[prev.leaf_parent[h]];
      if (s == SIZE_MAX) throw InputError("forest parent map is not total");
      next.leaf_parent[h] = s;
    }
    next.graph.resize(size);
    for (const auto& e : lv.at("edges")) {
      auto a = idx(e.at(0)), b = idx(e.at(1));
      next.graph[a].push_back(b);
      next.graph[b].push_back(a);
    }
    for (auto& adj : next.graph) std::sort(adj.begin(), adj.end());
    levels.push_back(std::move(next));
  }
  return {std::move(window), std::move(levels)};
}

std::string forest_to_dot(const CoveringForest& forest) {
  const auto& w = forest.window();
  const auto& g = w.group();
  auto label = [&](std::size_t i) {
    auto s = g.format(w.element(i));
    return s.empty() ? std::string("e") : s;
  };
  std::ostringstream dot;
  dot << "digraph forest {\n  rankdir=BT;\n";
  for (std::size_t n = 0; n <= forest.height(); ++n) {
    dot << "  { rank=same;";
    for (auto c : forest.centers(n)) dot << " L" << n << "_" << c << ";";
    dot << " }\n";
    for (auto c : forest.centers(n)) {
      dot << "  L" << n << "_" << c << " [label=\"" << label(c);
      if (n > 0) dot << "\\n|C|=" << forest.cluster(n, c).size();
      if (n > 0 && !forest.is_interior(n, c)) dot << "\\nexterior";
      dot << "\"];\n";
    }
  }
  for (std::size_t n = 0; n < forest.height(); ++n) {
    for (auto c : forest.centers(n)) {
      dot << "  L" << n << "_" << c << " -> L" << n + 1 << "_" << forest.step_parent(n, c) << ";\n";
    }
  }
  dot << "}\n";
  return dot.str();
}

json to_json(const DensityReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"set", s.descriptor},
                       {"size", s.size},
                       {"ones", s.ones},
                       {"density", to_string(s.density)}});
  }
  return {{"slope", report.slope},
          {"max_deviation", to_string(report.max_deviation)},
          {"samples", std::move(samples)}};
}

DensityReport density_report_from_json(const json& j) {
  DensityReport r;
  r.slope = field<std::string>(j, "slope");
  r.max_deviation = parse_rational(field<std::string>(j, "max_deviation"));
  for (const auto& s : j.at("samples")) {
    r.samples.push_back({field<std::string>(s, "set"), field<std::size_t>(s, "size"),
                         field<std::size_t>(s, "ones"),
                         parse_rational(field<std::string>(s, "density"))});
  }
  return r;
}

json to_json(const Condition1Report& report, const Window& window) {
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"level", c.level},
                        {"center", window.group().format(window.element(c.center))},
                        {"size", c.size},
                        {"floor", c.floor},
                        {"ones", c.ones},
                        {"interior", c.interior},
                        {"pass", c.pass}});
  }
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"level", a.level},
                          {"centers", a.centers},
                          {"leaves", a.leaves},
                          {"ones", a.ones},
                          {"density", to_string(a.density)},
                          {"deviation", to_string(a.deviation)},
                          {"bound", to_string(a.bound)},
                          {"pass", a.pass}});
  }
  return {{"pass", report.pass()},
          {"interior_failures", report.interior_failures},
          {"exterior_failures", report.exterior_failures},
          {"aggregates", std::move(aggregates)},
          {"clusters", std::move(clusters)}};
}

namespace {

void require_planar(const WindowConfig& x, bool allow_line) {
  const auto& g = x.group();
  bool ok = g.kind() == GroupKind::integer_lattice &&
            (g.dimension() == 2 || (allow_line && g.dimension() == 1));
  if (!ok) throw InputError("grid export needs a z^2 window" + std::string(allow_line ? " or z^1" : ""));
}

}  // namespace

std::string to_csv(const WindowConfig& x) {
  require_planar(x, true);
  const auto& w = x.window();
  const auto r = static_cast<std::int64_t>(w.radius());
  std::ostringstream out;
  const bool line = w.group().dimension() == 1;
  for (std::int64_t y = line ? 0 : r; y >= (line ? 0 : -r); --y) {
    for (std::int64_t c = -r; c <= r; ++c) {
      if (c > -r) out << ',';
      Element g{line ? std::vector<std::int64_t>{c} : std::vector<std::int64_t>{c, y}};
      if (auto idx = w.find(g)) out << x.at(*idx);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_pgm(const WindowConfig& x) {
  require_planar(x, false);
  if (x.alphabet_size() != 2) throw InputError("PGM export needs a binary alphabet");
  const auto& w = x.window();
  const auto r = static_cast<std::int64_t>(w.radius());
  const auto side = 2 * r + 1;
  std::ostringstream out;
  out << "P2\n" << side << ' ' << side << "\n255\n";
  for (std::int64_t y = r; y >= -r; --y) {
    for (std::int64_t c = -r; c <= r; ++c) {
      if (c > -r) out << ' ';
      auto idx = w.find(Element{{c, y}});
      out << (!idx ? 128 : (x.at(*idx) == 1 ? 0 : 255));
    }
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
}

}  // namespace symdyn::io
