#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "histloom/density.hpp"
#include "histloom/heavy_atoms.hpp"
#include "histloom/merge_learner.hpp"
#include "histloom/partition.hpp"

namespace histloom {

// JSON forms:
//   PiecewiseDensity      {"breakpoints": [...], "values": [...]}
//   MixedDensity          {"histogram": {...}, "atoms": [{"x":..,"mass":..}]}
//   IntervalPartition     [c_0, ..., c_z]
//   DiscreteDistribution  {"weights": [...]}
//   MergeState (trace)    {"t":.., "intervals":[[lo,hi],..], "frozen":[..]}

nlohmann::json to_json(const PiecewiseDensity& d);
PiecewiseDensity density_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MixedDensity& d);
MixedDensity mixed_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IntervalPartition& p);
IntervalPartition partition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DiscreteDistribution& d);
DiscreteDistribution discrete_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MergeState& s);

/// Serializes a learner trace as JSON lines, one MergeState per line.
std::string trace_to_jsonl(const std::vector<MergeState>& trace);

// Sample files.  Text: one decimal per line, 17 significant digits
// (round-trip exact for doubles).  Binary: magic "HLS1", little-endian
// uint64 count, then raw little-endian doubles.
void write_samples_text(const std::string& path, const std::vector<double>& points);
std::vector<double> read_samples_text(const std::string& path);
void write_samples_binary(const std::string& path, const std::vector<double>& points);
std::vector<double> read_samples_binary(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace histloom
