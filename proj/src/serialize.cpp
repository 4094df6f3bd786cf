#include "histloom/serialize.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace histloom {

using nlohmann::json;

nlohmann::json to_json(const PiecewiseDensity& d) {
    return json{{"breakpoints", d.breakpoints()}, {"values", d.values()}};
}

PiecewiseDensity density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument("density JSON: expected {breakpoints, values}");
    return PiecewiseDensity(j.at("breakpoints").get<std::vector<double>>(),
                            j.at("values").get<std::vector<double>>());
}

nlohmann::json to_json(const MixedDensity& d) {
    json atoms = json::array();
    for (const HeavyAtom& a : d.atoms) atoms.push_back(json{{"x", a.location}, {"mass", a.mass}});
    return json{{"histogram", to_json(d.histogram)}, {"atoms", atoms}};
}

MixedDensity mixed_from_json(const json& j) {
    if (!j.is_object() || !j.contains("histogram") || !j.contains("atoms"))
        throw std::invalid_argument("mixed density JSON: expected {histogram, atoms}");
    MixedDensity out;
    out.histogram = density_from_json(j.at("histogram"));
    for (const json& a : j.at("atoms"))
        out.atoms.push_back(HeavyAtom{a.at("x").get<double>(), a.at("mass").get<double>()});
    return out;
}

nlohmann::json to_json(const IntervalPartition& p) { return json(p.cuts); }

IntervalPartition partition_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("partition JSON: expected an array of cuts");
    return IntervalPartition{j.get<std::vector<double>>()};
}

nlohmann::json to_json(const DiscreteDistribution& d) {
    return json{{"weights", d.weights()}};
}

DiscreteDistribution discrete_from_json(const json& j) {
    if (!j.is_object() || !j.contains("weights"))
        throw std::invalid_argument("discrete JSON: expected {weights}");
    return DiscreteDistribution(j.at("weights").get<std::vector<double>>());
}

nlohmann::json to_json(const MergeState& s) {
    json intervals = json::array();
    for (const Interval& I : s.intervals) intervals.push_back(json::array({I.lo, I.hi}));
    json frozen = json::array();
    for (std::uint8_t f : s.frozen) frozen.push_back(f != 0);
    return json{{"t", s.t}, {"intervals", intervals}, {"frozen", frozen}};
}

std::string trace_to_jsonl(const std::vector<MergeState>& trace) {
    std::ostringstream out;
    for (const MergeState& s : trace) out << to_json(s).dump() << '\n';
    return out.str();
}

// --- sample files -------------------------------------------------------------

void write_samples_text(const std::string& path, const std::vector<double>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[64];
    for (double p : points) {
        std::snprintf(buf, sizeof buf, "%.17g\n", p);
        out << buf;
    }
}

std::vector<double> read_samples_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() || (end != nullptr && *end != '\0'))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": not a decimal sample value");
        if (!(v >= 0.0 && v < 1.0))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": sample outside [0,1)");
        out.push_back(v);
    }
    return out;
}

namespace {
constexpr char kMagic[4] = {'H', 'L', 'S', '1'};
static_assert(sizeof(double) == 8);
}  // namespace

void write_samples_binary(const std::string& path, const std::vector<double>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, 4);
    const std::uint64_t n = points.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(points.data()),
              static_cast<std::streamsize>(points.size() * sizeof(double)));
}

std::vector<double> read_samples_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a HLS1 sample file");
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    std::vector<double> out(n);
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated sample file");
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!(out[i] >= 0.0 && out[i] < 1.0))
            throw std::runtime_error(path + ": sample " + std::to_string(i) +
                                     " outside [0,1)");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

}  // namespace histloom
