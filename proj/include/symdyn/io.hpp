#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "symdyn/aperiodic.hpp"
#include "symdyn/density.hpp"
#include "symdyn/lll.hpp"
#include "symdyn/shift.hpp"

namespace symdyn::io {

using nlohmann::json;

// {"group", "radius", "alphabet", "cells": [[word, symbol], ...]}
json to_json(const WindowConfig& x);
WindowConfig config_from_json(const json& j, std::size_t ball_cap = kDefaultBallCap);

// Same shape as a window; "radius" is the largest support length.
json to_json(const GroupModel& group, const Pattern& p);
Pattern pattern_from_json(const json& j, const GroupModel& group);

json to_json(const LLLInstance& inst);
LLLInstance instance_from_json(const json& j);

json to_json(const LLLInstance& inst, const Verdict& v);
json to_json(const ResampleRun& run, std::uint64_t seed);

json to_json(const GroupModel& group, const TSets& tsets);

json to_json(const CoveringForest& forest);
CoveringForest forest_from_json(const json& j, std::size_t ball_cap = kDefaultBallCap);
std::string forest_to_dot(const CoveringForest& forest);

json to_json(const DensityReport& report);
DensityReport density_report_from_json(const json& j);

json to_json(const Condition1Report& report, const Window& window);

/// Rows from the top (y = R) down; cells outside the ball are left blank.
/// Z^1 and Z^2 only.
std::string to_csv(const WindowConfig& x);
/// Plain PGM: symbol 1 black, 0 white, outside the ball mid-gray. Binary Z^2 only.
std::string to_pgm(const WindowConfig& x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace symdyn::io
