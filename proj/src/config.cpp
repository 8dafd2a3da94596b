#include "avekit/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace avekit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

const std::string* ConfigSection::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e.value;
    return nullptr;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

ConfigDoc parse_config(const std::string& text) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            if (doc.find(name))
                throw ConfigError("config: duplicate section [" + name + "]");
            doc.sections.push_back({name, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        if (doc.sections.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": entry before any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (doc.sections.back().find(key))
            throw ConfigError("config: duplicate key '" + key + "' in [" +
                              doc.sections.back().name + "]");
        doc.sections.back().entries.push_back({key, value});
    }
    return doc;
}

std::string serialize_config(const ConfigDoc& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.sections.size(); ++i) {
        if (i > 0) out += "\n";
        out += "[" + doc.sections[i].name + "]\n";
        for (const auto& e : doc.sections[i].entries) out += e.key + " = " + e.value + "\n";
    }
    return out;
}

ConfigDoc load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double parse_double(const std::string& value, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE)
        throw ConfigError(what + ": '" + value + "' is not a number");
    return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE ||
        value.find('-') != std::string::npos)
        throw ConfigError(what + ": '" + value + "' is not a nonnegative integer");
    return v;
}

bool parse_bool(const std::string& value, const std::string& what) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(what + ": '" + value + "' is not true/false");
}

std::vector<double> parse_double_list(const std::string& value, const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, what));
    }
    if (out.empty()) throw ConfigError(what + ": empty value list");
    return out;
}

std::vector<std::string> split_names(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

namespace {

void require_known_keys(const ConfigSection& section,
                        const std::set<std::string>& known) {
    for (const auto& e : section.entries)
        if (!known.count(e.key))
            throw ConfigError("config: unknown key '" + e.key + "' in [" + section.name + "]");
}

void apply_problem(const ConfigSection& s, ProblemSpec& p) {
    require_known_keys(s, {"generator", "n", "seed", "sigma_floor", "path"});
    if (const auto* v = s.find("generator")) p.generator = *v;
    if (const auto* v = s.find("n")) p.n = static_cast<std::size_t>(parse_u64(*v, "problem.n"));
    if (const auto* v = s.find("seed")) p.seed = parse_u64(*v, "problem.seed");
    if (const auto* v = s.find("sigma_floor"))
        p.sigma_floor = parse_double(*v, "problem.sigma_floor");
    if (const auto* v = s.find("path")) p.path = *v;
    if (p.generator.empty())
        throw ConfigError("config: [problem] must set 'generator'");
    if (p.generator != "tridiag" && p.generator != "random" && p.generator != "file")
        throw ConfigError("config: problem.generator must be tridiag, random or file");
    if (p.generator == "file" && p.path.empty())
        throw ConfigError("config: problem.generator = file requires 'path'");
    if (p.generator != "file" && p.n == 0)
        throw ConfigError("config: [problem] must set a positive 'n'");
}

void apply_model(const ConfigSection& s, ModelConfig& m, std::vector<std::string>& names) {
    require_known_keys(s, {"name", "names", "gamma", "rho1", "rho2", "lambda1", "lambda2",
                           "fix_threshold", "lambda", "beta", "rho"});
    if (const auto* v = s.find("name")) m.name = *v;
    if (const auto* v = s.find("names")) names = split_names(*v);
    if (const auto* v = s.find("gamma")) m.gamma = parse_double(*v, "model.gamma");
    if (const auto* v = s.find("rho1")) m.rho1 = parse_double(*v, "model.rho1");
    if (const auto* v = s.find("rho2")) m.rho2 = parse_double(*v, "model.rho2");
    if (const auto* v = s.find("lambda1")) m.lambda1 = parse_double(*v, "model.lambda1");
    if (const auto* v = s.find("lambda2")) m.lambda2 = parse_double(*v, "model.lambda2");
    if (const auto* v = s.find("fix_threshold"))
        if (*v != "auto") m.fix_threshold = parse_double(*v, "model.fix_threshold");
    if (const auto* v = s.find("lambda")) m.mee_lambda = parse_double(*v, "model.lambda");
    if (const auto* v = s.find("beta"))
        if (*v != "auto") m.mee_beta = parse_double(*v, "model.beta");
    if (const auto* v = s.find("rho")) m.gao_rho = parse_double(*v, "model.rho");
    if (m.name.empty() && names.empty())
        throw ConfigError("config: [model] must set 'name' (or 'names' for compare)");
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw ConfigError("config: model.names lists '" + names[i] + "' twice");
}

void apply_integrator(const ConfigSection& s, ExperimentConfig& cfg) {
    require_known_keys(s, {"rtol", "atol", "initial_step", "max_step", "min_step", "max_steps",
                           "event_residual_tol", "t_final"});
    IntegratorOptions& o = cfg.integrator;
    if (const auto* v = s.find("rtol")) o.rtol = parse_double(*v, "integrator.rtol");
    if (const auto* v = s.find("atol")) o.atol = parse_double(*v, "integrator.atol");
    if (const auto* v = s.find("initial_step"))
        o.initial_step = (*v == "auto") ? 0.0 : parse_double(*v, "integrator.initial_step");
    if (const auto* v = s.find("max_step")) o.max_step = parse_double(*v, "integrator.max_step");
    if (const auto* v = s.find("min_step")) o.min_step = parse_double(*v, "integrator.min_step");
    if (const auto* v = s.find("max_steps"))
        o.max_accepted_steps = static_cast<std::size_t>(parse_u64(*v, "integrator.max_steps"));
    if (const auto* v = s.find("t_final")) o.t_final = parse_double(*v, "integrator.t_final");
    if (const auto* v = s.find("event_residual_tol")) {
        if (*v == "none") {
            cfg.event_tol_disabled = true;
        } else if (*v != "auto") {
            o.event_residual_tol = parse_double(*v, "integrator.event_residual_tol");
            cfg.event_tol_given = true;
        }
    }
}

void apply_sweep(const ConfigSection& s, std::optional<SweepSpec>& sweep) {
    require_known_keys(s, {"parameter", "values"});
    SweepSpec spec;
    const auto* par = s.find("parameter");
    const auto* vals = s.find("values");
    if (!par || !vals)
        throw ConfigError("config: [sweep] must set 'parameter' and 'values'");
    spec.parameter = sweep_parameter_from_string(*par);
    spec.values = parse_double_list(*vals, "sweep.values");
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        for (std::size_t j = i + 1; j < spec.values.size(); ++j)
            if (spec.values[i] == spec.values[j])
                throw ConfigError("config: sweep.values lists " +
                                  std::to_string(spec.values[i]) + " twice");
    sweep = spec;
}

void apply_output(const ConfigSection& s, OutputSpec& out) {
    require_known_keys(s, {"dir", "format", "write_problem"});
    if (const auto* v = s.find("dir")) out.dir = *v;
    if (const auto* v = s.find("format")) out.format = *v;
    if (const auto* v = s.find("write_problem"))
        out.write_problem = parse_bool(*v, "output.write_problem");
    if (out.format != "csv")
        throw ConfigError("config: output.format must be csv");
}

} // namespace

ExperimentConfig experiment_from_doc(const ConfigDoc& doc) {
    ExperimentConfig cfg;
    cfg.doc = doc;
    bool have_problem = false, have_model = false;
    for (const auto& section : doc.sections) {
        if (section.name == "problem") {
            apply_problem(section, cfg.problem);
            have_problem = true;
        } else if (section.name == "model") {
            apply_model(section, cfg.model, cfg.compare_models);
            have_model = true;
        } else if (section.name == "integrator") {
            apply_integrator(section, cfg);
        } else if (section.name == "sweep") {
            apply_sweep(section, cfg.sweep);
        } else if (section.name == "output") {
            apply_output(section, cfg.output);
        } else if (section.name == "verify") {
            require_known_keys(section, {"samples"});
            if (const auto* v = section.find("samples")) {
                cfg.verify_samples = static_cast<std::size_t>(parse_u64(*v, "verify.samples"));
                if (cfg.verify_samples == 0)
                    throw ConfigError("config: verify.samples must be positive");
            }
        } else {
            throw ConfigError("config: unknown section [" + section.name + "]");
        }
    }
    if (!have_problem) throw ConfigError("config: missing [problem] section");
    if (!have_model) throw ConfigError("config: missing [model] section");
    cfg.integrator.validate();
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
    return experiment_from_doc(load_config_file(path));
}

} // namespace avekit
