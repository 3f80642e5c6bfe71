#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "symdyn/aperiodic.hpp"
#include "symdyn/density.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/io.hpp"
#include "symdyn/lll.hpp"

namespace symdyn::cli {

using io::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

namespace {

// Verification failure that has already been reported on `out`.
struct Failed {};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Collects artifacts and writes the run manifest next to the primary one.
class Run {
 public:
  Run(const std::vector<std::string>& args) : args_(args), start_(std::chrono::steady_clock::now()) {}

  void set_group(std::string spec) { group_ = std::move(spec); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_cap(const std::string& name, std::uint64_t value) { caps_[name] = value; }

  void write(const std::string& path, const std::string& contents) {
    io::write_file(path, contents);
    artifacts_.push_back({{"path", path}, {"sha256", sha256_hex(contents)}, {"bytes", contents.size()}});
  }

  void finish() const {
    if (artifacts_.empty()) return;
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest = {{"command", args_},
                     {"group", group_},
                     {"seed", seed_},
                     {"caps", caps_},
                     {"artifacts", artifacts_},
                     {"duration_seconds", elapsed}};
    io::write_file(artifacts_.front()["path"].get<std::string>() + ".manifest.json", dump(manifest));
  }

 private:
  std::vector<std::string> args_;
  std::chrono::steady_clock::time_point start_;
  std::string group_;
  std::uint64_t seed_ = 0;
  json caps_ = json::object();
  json artifacts_ = json::array();
};

struct GroupOpts {
  std::string spec;
  std::size_t radius = 0;
  std::size_t ball_cap = kDefaultBallCap;

  GroupModel group() const { return GroupModel::parse(spec).with_ball_cap(ball_cap); }
  std::shared_ptr<const Window> window() const { return Window::make(group(), radius); }
};

void add_group(CLI::App* sub, GroupOpts& g, bool with_radius, bool required = true) {
  sub->add_option("--group", g.spec, "z^d, free:k, z2*z3 or heisenberg")->required(required);
  if (with_radius) sub->add_option("--radius", g.radius, "window radius R")->required(required);
  sub->add_option("--ball-cap", g.ball_cap, "largest ball enumerated");
}

json read_json(const std::string& path) {
  try {
    return json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not JSON: " + e.what());
  }
}

std::string encode_config(const WindowConfig& x, const std::string& format, json extra) {
  if (format == "csv") return io::to_csv(x);
  if (format == "pgm") return io::to_pgm(x);
  if (format != "json") throw InputError("format '" + format + "' does not apply to configurations");
  auto j = io::to_json(x);
  j.update(extra);
  return dump(j);
}

Symbol parse_alphabet(const std::string& text) {
  // Accepts a plain count or a power of two written 2^k.
  std::uint64_t value = 0;
  try {
    if (text.rfind("2^", 0) == 0) {
      auto k = std::stoul(text.substr(2));
      if (k > 31) throw InputError("alphabet too large");
      value = std::uint64_t{1} << k;
    } else {
      value = std::stoull(text);
    }
  } catch (const std::logic_error&) {
    throw InputError("bad alphabet size '" + text + "'");
  }
  if (value < 2 || value > std::numeric_limits<Symbol>::max()) {
    throw InputError("alphabet size out of range: " + text);
  }
  return static_cast<Symbol>(value);
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoul(text);
      return {v, v};
    }
    auto a = std::stoul(text.substr(0, dots));
    auto b = std::stoul(text.substr(dots + 2));
    if (a > b) throw InputError("empty range '" + text + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw InputError("bad range '" + text + "', expected a..b");
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-window constructions and verifiers for colorings of finitely generated groups",
               "symdyn"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Run run(args);
  GroupOpts g;
  std::uint64_t seed = 0;
  std::size_t levels = 1;
  std::size_t c = 17;
  std::size_t cap = kDefaultResampleCap;
  std::string out_path, format = "json", word, instance_path, config_path, forest_path, alpha_text;
  std::string alphabet_text, log_path, balls = "1..25";
  std::size_t max_c = 32, s = 1, maxlen = 0, path_budget = kDefaultPathBudget;
  bool has_c = false;

  auto formats = CLI::IsMember({"json", "dot", "csv", "pgm"});

  // group
  auto* group_cmd = app.add_subcommand("group", "Group normal forms and balls");
  group_cmd->require_subcommand(1);
  auto* group_ball = group_cmd->add_subcommand("ball", "List B(1, R) in BFS order");
  add_group(group_ball, g, true);
  group_ball->add_option("--out", out_path);
  auto* group_canon = group_cmd->add_subcommand("canon", "Canonical form and length of a word");
  add_group(group_canon, g, false);
  group_canon->add_option("--word", word)->required();

  // lll
  auto* lll_cmd = app.add_subcommand("lll", "Local-lemma constants and instances");
  lll_cmd->require_subcommand(1);
  auto* lll_const = lll_cmd->add_subcommand("check-constant", "Least C with 16C 2^{C/2} <= (2^{C/2}-1)^2");
  lll_const->add_option("--max", max_c, "largest C scanned");
  auto* lll_bound = lll_cmd->add_subcommand("alphabet-bound", "Square-free alphabet size 2^19 s^2");
  lll_bound->add_option("--s", s, "generator count |S|")->required();
  auto* lll_verify = lll_cmd->add_subcommand("verify", "Check the asymmetric condition exactly");
  lll_verify->add_option("--instance", instance_path)->required();
  lll_verify->add_option("--out", out_path);
  auto* lll_resample = lll_cmd->add_subcommand("resample", "Run the resampling algorithm");
  lll_resample->add_option("--instance", instance_path)->required();
  lll_resample->add_option("--seed", seed);
  lll_resample->add_option("--cap", cap, "resampling step cap");
  lll_resample->add_option("--out", out_path)->required();

  // color
  auto* color_cmd = app.add_subcommand("color", "Build colorings by resampling");
  color_cmd->require_subcommand(1);
  auto* color_two = color_cmd->add_subcommand("two", "Distinct-neighborhood 2-coloring");
  add_group(color_two, g, true);
  color_two->add_option("--c", c, "test-set constant C");
  color_two->add_option("--levels", levels, "largest level n");
  color_two->add_option("--seed", seed);
  color_two->add_option("--cap", cap, "resampling step cap");
  color_two->add_option("--out", out_path);
  color_two->add_option("--format", format)->check(formats);
  color_two->add_option("--instance-out", instance_path, "also write the instance");
  color_two->add_option("--log", log_path, "also write the resample log");
  auto* color_sq = color_cmd->add_subcommand("squarefree", "Square-free vertex coloring");
  add_group(color_sq, g, true);
  color_sq->add_option("--alphabet", alphabet_text, "alphabet size, e.g. 2097152 or 2^21")->required();
  color_sq->add_option("--maxlen", maxlen, "largest half-length L")->required();
  color_sq->add_option("--seed", seed);
  color_sq->add_option("--cap", cap, "resampling step cap");
  color_sq->add_option("--path-budget", path_budget, "path enumeration cap");
  color_sq->add_option("--out", out_path);
  color_sq->add_option("--format", format)->check(formats);
  color_sq->add_option("--log", log_path, "also write the resample log");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check stored configurations");
  verify_cmd->require_subcommand(1);
  auto* verify_distinct = verify_cmd->add_subcommand("distinct", "Distinct-neighborhood check");
  verify_distinct->add_option("--config", config_path)->required();
  verify_distinct->add_option("--levels", levels)->required();
  verify_distinct->add_option("--c", c, "test-set constant (default: from the config, else 17)")
      ->each([&](const std::string&) { has_c = true; });
  verify_distinct->add_option("--out", out_path);

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "Simple path witnessing a nontrivial element");
  add_group(witness_cmd, g, false);
  witness_cmd->add_option("--word", word)->required();
  witness_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  witness_cmd->add_option("--out", out_path);

  // density
  auto* density_cmd = app.add_subcommand("density", "Covering forests and uniform-density fills");
  density_cmd->require_subcommand(1);
  auto* d_forest = density_cmd->add_subcommand("build-forest", "Build a covering forest");
  add_group(d_forest, g, true);
  d_forest->add_option("--levels", levels)->required();
  d_forest->add_option("--out", out_path);
  d_forest->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  auto* d_fill = density_cmd->add_subcommand("fill", "Sturmian fill along a covering forest");
  add_group(d_fill, g, true, false);
  d_fill->add_option("--levels", levels);
  d_fill->add_option("--forest", forest_path, "read the forest instead of building it");
  d_fill->add_option("--alpha", alpha_text, "slope p/q or decimal")->required();
  d_fill->add_option("--out", out_path);
  d_fill->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "pgm"}));
  auto* d_verify = density_cmd->add_subcommand("verify", "Check cluster and aggregate densities");
  d_verify->add_option("--config", config_path);
  d_verify->add_option("--forest", forest_path);
  d_verify->add_option("--alpha", alpha_text);
  d_verify->add_option("--levels", levels);
  d_verify->add_option("--out", out_path);
  auto* d_measure = density_cmd->add_subcommand("measure", "Densities on a ball sequence");
  d_measure->add_option("--config", config_path);
  d_measure->add_option("--balls", balls, "radius range a..b");
  d_measure->add_option("--alpha", alpha_text, "reference slope (default: from the config)");
  d_measure->add_option("--out", out_path);

  auto fail = [&](const char* kind, const std::string& reason, int code) {
    err << json{{"error", kind}, {"reason", one_line(reason)}}.dump() << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  if (color_two->parsed() && out_path.empty()) out_path = "cfg.json";
  if (color_sq->parsed() && out_path.empty()) out_path = "squarefree.json";
  if (d_forest->parsed() && out_path.empty()) out_path = "forest.json";
  if (d_fill->parsed() && out_path.empty()) out_path = "fill.json";
  if (d_verify->parsed() && config_path.empty()) config_path = "fill.json";
  if (d_measure->parsed() && config_path.empty()) config_path = "fill.json";
  if (d_measure->parsed() && out_path.empty()) out_path = "report.json";
  run.set_seed(seed);
  if (!g.spec.empty()) run.set_group(g.spec);

  try {
    if (group_ball->parsed()) {
      auto w = g.window();
      json elements = json::array();
      json growth = json::array();
      for (std::size_t i = 0; i < w->size(); ++i) {
        elements.push_back(w->group().format(w->element(i)));
        if (growth.size() <= w->depth(i)) growth.push_back(0);
        growth[w->depth(i)] = growth[w->depth(i)].get<std::size_t>() + 1;
      }
      json j = {{"group", w->group().spec()}, {"radius", w->radius()}, {"size", w->size()},
                {"sphere_sizes", growth}, {"elements", elements}};
      run.set_cap("ball", g.ball_cap);
      if (out_path.empty()) {
        out << dump(j);
      } else {
        run.write(out_path, dump(j));
        out << json{{"size", w->size()}}.dump() << "\n";
      }
    } else if (group_canon->parsed()) {
      auto group = g.group();
      auto x = group.parse_element(word);
      out << json{{"word", word}, {"canonical", group.format(x)}, {"length", group.length(x)}}.dump()
          << "\n";
    } else if (lll_const->parsed()) {
      out << aperiodic_constant_scan(max_c) << "\n";
    } else if (lll_bound->parsed()) {
      out << squarefree_alphabet_bound(s).get_str() << "\n";
    } else if (lll_verify->parsed()) {
      auto inst = io::instance_from_json(read_json(instance_path));
      auto verdict = verify_condition(inst);
      auto j = io::to_json(inst, verdict);
      if (out_path.empty()) {
        out << dump(j);
      } else {
        run.write(out_path, dump(j));
        std::size_t failing = 0;
        for (const auto& m : verdict.margins) failing += m.margin.sign() < 0;
        out << json{{"holds", verdict.holds}, {"events", inst.events.size()}, {"failing", failing}}.dump()
            << "\n";
      }
      if (!verdict.holds) throw Failed{};
    } else if (lll_resample->parsed()) {
      auto inst = io::instance_from_json(read_json(instance_path));
      run.set_cap("resample", cap);
      auto result = resample(inst, seed, cap);
      auto j = io::to_json(result, seed);
      j["assignment"] = result.assignment;
      run.write(out_path, dump(j));
      out << json{{"resamples", result.trace.size()}, {"avoids_all", avoids_all(inst, result.assignment)}}.dump()
          << "\n";
    } else if (color_two->parsed()) {
      auto w = g.window();
      run.set_cap("ball", g.ball_cap);
      run.set_cap("resample", cap);
      auto tsets = build_t_sets(w->group(), c, levels);
      auto inst = build_2coloring_instance(*w, tsets, levels);
      auto verdict = verify_condition(inst);
      auto result = resample(inst, seed, cap);
      auto x = assignment_to_config(w, 2, result.assignment);
      auto report = verify_distinct_neighborhood(x, tsets, levels);
      run.write(out_path, encode_config(x, format, {{"c", c}, {"levels", levels}, {"seed", seed}}));
      if (!instance_path.empty()) run.write(instance_path, dump(io::to_json(inst)));
      if (!log_path.empty()) run.write(log_path, dump(io::to_json(result, seed)));
      json radii = json::array();
      auto tsets_json = io::to_json(w->group(), tsets);
      for (const auto& level : tsets_json["levels"]) radii.push_back(level["radius"]);
      out << json{{"events", inst.events.size()},
                  {"t_set_radii", radii},
                  {"condition_holds", verdict.holds},
                  {"resamples", result.trace.size()},
                  {"pairs_checked", report.pairs_checked},
                  {"violations", report.violations.size()},
                  {"warnings", inst.warnings}}
                 .dump()
          << "\n";
      if (!report.clean()) throw Failed{};
    } else if (color_sq->parsed()) {
      auto w = g.window();
      auto alphabet = parse_alphabet(alphabet_text);
      run.set_cap("ball", g.ball_cap);
      run.set_cap("resample", cap);
      run.set_cap("paths", path_budget);
      PathWindow paths(*w);
      auto inst = build_squarefree_instance(paths, alphabet, maxlen, w->group().generator_count(),
                                            path_budget);
      auto verdict = verify_condition(inst);
      auto result = resample(inst, seed, cap);
      auto square = find_vertex_square(result.assignment, paths, maxlen);
      WindowConfig x(w, alphabet, result.assignment);
      run.write(out_path, encode_config(x, format, {{"maxlen", maxlen}, {"seed", seed}}));
      if (!log_path.empty()) run.write(log_path, dump(io::to_json(result, seed)));
      json summary = {{"events", inst.events.size()},
                      {"condition_holds", verdict.holds},
                      {"resamples", result.trace.size()},
                      {"square_free", !square.has_value()},
                      {"warnings", inst.warnings}};
      if (square) {
        json path = json::array();
        for (auto v : *square) path.push_back(w->group().format(w->element(v)));
        summary["square"] = path;
      }
      out << summary.dump() << "\n";
      if (square) throw Failed{};
    } else if (verify_distinct->parsed()) {
      auto j = read_json(config_path);
      auto x = io::config_from_json(j);
      if (!has_c && j.contains("c")) c = j.at("c").get<std::size_t>();
      run.set_group(x.group().spec());
      auto tsets = build_t_sets(x.group(), c, levels);
      auto report = verify_distinct_neighborhood(x, tsets, levels);
      json violations = json::array();
      for (const auto& [n, h] : report.violations) violations.push_back({n, x.group().format(h)});
      json summary = {{"pairs_checked", report.pairs_checked}, {"violations", report.violations.size()}};
      if (!out_path.empty()) {
        json full = summary;
        full["c"] = c;
        full["levels"] = levels;
        full["at"] = violations;
        run.write(out_path, dump(full));
      }
      out << summary.dump() << "\n";
      if (!report.clean()) throw Failed{};
    } else if (witness_cmd->parsed()) {
      auto group = g.group();
      run.set_cap("ball", g.ball_cap);
      auto path = witness_path(group, group.parse_word(word));
      if (!path) throw InputError("'" + word + "' represents the identity");
      std::string text;
      if (format == "dot") {
        text = witness_to_dot(group, *path);
      } else {
        json vertices = json::array();
        for (const auto& v : path->vertices) vertices.push_back(group.format(v));
        text = dump({{"group", group.spec()},
                     {"word", word},
                     {"conjugator", group.format(path->conjugator)},
                     {"core", group.format_word(path->core)},
                     {"search_bound", path->search_bound},
                     {"exact", path->exact},
                     {"simple", is_simple(path->vertices)},
                     {"vertices", vertices}});
      }
      if (out_path.empty()) {
        out << text;
      } else {
        run.write(out_path, text);
      }
    } else if (d_forest->parsed()) {
      auto w = g.window();
      run.set_cap("ball", g.ball_cap);
      auto forest = build_forest(w, levels);
      run.write(out_path, format == "dot" ? io::forest_to_dot(forest) : dump(io::to_json(forest)));
      json counts = json::array();
      for (std::size_t n = 0; n <= forest.height(); ++n) counts.push_back(forest.centers(n).size());
      out << json{{"centers", counts}}.dump() << "\n";
    } else if (d_fill->parsed()) {
      auto alpha = Slope::parse(alpha_text);
      std::optional<CoveringForest> forest;
      if (!forest_path.empty()) {
        forest = io::forest_from_json(read_json(forest_path), g.ball_cap);
      } else {
        if (g.spec.empty() || g.radius == 0) throw InputError("fill needs --forest or --group and --radius");
        forest = build_forest(g.window(), levels);
      }
      run.set_group(forest->window().group().spec());
      run.set_cap("ball", g.ball_cap);
      auto x = fill_density(*forest, alpha);
      run.write(out_path, encode_config(x, format, {{"levels", forest->height()}, {"alpha", alpha.to_string()}}));
      std::size_t ones = std::count(x.symbols().begin(), x.symbols().end(), Symbol{1});
      out << json{{"size", x.symbols().size()}, {"ones", ones}, {"alpha", alpha.to_string()}}.dump() << "\n";
    } else if (d_verify->parsed()) {
      auto j = read_json(config_path);
      auto x = io::config_from_json(j);
      run.set_group(x.group().spec());
      if (alpha_text.empty()) {
        if (!j.contains("alpha")) throw InputError("no --alpha and the config records none");
        alpha_text = j.at("alpha").get<std::string>();
      }
      auto alpha = Slope::parse(alpha_text);
      std::optional<CoveringForest> forest;
      if (!forest_path.empty()) {
        forest = io::forest_from_json(read_json(forest_path));
      } else {
        if (d_verify->count("--levels") == 0 && j.contains("levels")) levels = j.at("levels").get<std::size_t>();
        forest = build_forest(x.window_ptr(), levels);
      }
      auto report = verify_condition1(x, *forest, alpha);
      if (!out_path.empty()) run.write(out_path, dump(io::to_json(report, x.window())));
      json aggregates = json::array();
      for (const auto& a : report.aggregates) {
        aggregates.push_back({{"level", a.level}, {"deviation", to_string(a.deviation)},
                              {"bound", to_string(a.bound)}, {"pass", a.pass}});
      }
      out << json{{"pass", report.pass()},
                  {"clusters", report.clusters.size()},
                  {"interior_failures", report.interior_failures},
                  {"exterior_failures", report.exterior_failures},
                  {"aggregates", aggregates}}
                 .dump()
          << "\n";
      if (!report.pass()) throw Failed{};
    } else if (d_measure->parsed()) {
      auto j = read_json(config_path);
      auto x = io::config_from_json(j);
      run.set_group(x.group().spec());
      if (alpha_text.empty()) alpha_text = j.value("alpha", std::string("1/2"));
      auto alpha = Slope::parse(alpha_text);
      auto [lo, hi] = parse_range(balls);
      if (hi > x.radius()) throw InputError("ball radius " + std::to_string(hi) + " exceeds the window");
      auto sets = ball_sequence(x.window(), lo, hi);
      auto report = measure_density(x, sets, alpha);
      run.write(out_path, dump(io::to_json(report)));
      out << json{{"samples", report.samples.size()}, {"max_deviation", to_string(report.max_deviation)},
                  {"max_deviation_approx", report.max_deviation.get_d()}}
                 .dump()
          << "\n";
    } else {
      return fail("usage", "no command given", kUsage);
    }
  } catch (const Failed&) {
    run.finish();
    return kVerificationFailed;
  } catch (const InputError& e) {
    return fail("input", e.what(), kUsage);
  } catch (const json::exception& e) {
    return fail("input", e.what(), kUsage);
  } catch (const NonterminatingError& e) {
    return fail("resource", std::string(e.what()) + " after " + std::to_string(e.trace().size()) +
                                " resamples", kResource);
  } catch (const ResourceError& e) {
    return fail("resource", e.what(), kResource);
  } catch (const InconclusiveError& e) {
    return fail("inconclusive", e.what(), kVerificationFailed);
  } catch (const NotFoundError& e) {
    return fail("not_found", e.what(), kVerificationFailed);
  } catch (const std::bad_alloc&) {
    return fail("resource", "out of memory", kResource);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kResource);
  }
  run.finish();
  return kOk;
}

}  // namespace symdyn::cli
