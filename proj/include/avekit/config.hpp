#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avekit/dynamics.hpp"
#include "avekit/ode.hpp"
#include "avekit/settling.hpp"

namespace avekit {

/// Flat-sectioned key/value text: [section] headers, key = value lines,
/// full-line # comments. Order-preserving so a document round-trips.
struct ConfigEntry {
    std::string key;
    std::string value;
    bool operator==(const ConfigEntry&) const = default;
};

struct ConfigSection {
    std::string name;
    std::vector<ConfigEntry> entries;
    bool operator==(const ConfigSection&) const = default;

    const std::string* find(const std::string& key) const;
};

struct ConfigDoc {
    std::vector<ConfigSection> sections;
    bool operator==(const ConfigDoc&) const = default;

    const ConfigSection* find(const std::string& name) const;
};

ConfigDoc parse_config(const std::string& text);
std::string serialize_config(const ConfigDoc& doc);
ConfigDoc load_config_file(const std::string& path);

double parse_double(const std::string& value, const std::string& what);
std::uint64_t parse_u64(const std::string& value, const std::string& what);
bool parse_bool(const std::string& value, const std::string& what);
std::vector<double> parse_double_list(const std::string& value, const std::string& what);
std::vector<std::string> split_names(const std::string& value);

struct ProblemSpec {
    std::string generator; // tridiag | random | file
    std::size_t n = 0;
    std::uint64_t seed = 1;
    double sigma_floor = 1.5;
    std::string path;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Gamma;
    std::vector<double> values;
};

struct OutputSpec {
    std::string dir = "out";
    std::string format = "csv";
    bool write_problem = false;
};

/// One experiment per file. Unknown sections or keys are rejected.
struct ExperimentConfig {
    ConfigDoc doc; // verbatim echo for reports

    ProblemSpec problem;
    ModelConfig model;
    std::vector<std::string> compare_models; // [model] names = a,b,...
    IntegratorOptions integrator;
    bool event_tol_given = false;    // explicit number in the file
    bool event_tol_disabled = false; // event_residual_tol = none
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    std::size_t verify_samples = 1000;
};

ExperimentConfig experiment_from_doc(const ConfigDoc& doc);
ExperimentConfig load_experiment(const std::string& path);

} // namespace avekit
