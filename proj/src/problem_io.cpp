#include "avekit/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "avekit/config.hpp"

namespace avekit {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

constexpr const char* kProblemMagic = "avekit problem v1";

void write_block(std::ostream& out, const char* name, const Vector& v, std::size_t per_line) {
    out << name << ":\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << format_full(v[i]);
        out << (((i + 1) % per_line == 0 || i + 1 == v.size()) ? '\n' : ' ');
    }
}

Vector read_block(std::istream& in, std::size_t count, const std::string& path) {
    Vector v(count);
    for (std::size_t i = 0; i < count; ++i)
        if (!(in >> v[i]))
            throw IoError("problem file '" + path + "': truncated numeric block");
    return v;
}

} // namespace

void save_problem(const AveProblem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write problem file '" + path + "'");
    out << kProblemMagic << "\n";
    out << "n = " << p.dim() << "\n";
    out << "generator = " << p.generator << "\n";
    out << "seed = " << p.seed << "\n";
    write_block(out, "A", p.A().data(), p.dim());
    write_block(out, "b", p.b(), p.dim());
    if (p.known_solution()) write_block(out, "xstar", *p.known_solution(), p.dim());
    if (!out) throw IoError("failed writing problem file '" + path + "'");
}

AveProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open problem file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kProblemMagic)
        throw IoError("problem file '" + path + "': bad magic line");

    std::size_t n = 0;
    std::string generator = "custom";
    std::uint64_t seed = 0;
    // metadata lines until the first block
    while (std::getline(in, line)) {
        if (line == "A:") break;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("problem file '" + path + "': expected 'key = value' before blocks");
        std::istringstream key_in(line.substr(0, eq));
        std::string key;
        key_in >> key;
        const std::string value = line.substr(eq + 1);
        std::istringstream value_in(value);
        if (key == "n") {
            if (!(value_in >> n)) throw IoError("problem file '" + path + "': bad n");
        } else if (key == "generator") {
            value_in >> generator;
        } else if (key == "seed") {
            if (!(value_in >> seed)) throw IoError("problem file '" + path + "': bad seed");
        } else {
            throw IoError("problem file '" + path + "': unknown metadata key '" + key + "'");
        }
    }
    if (n == 0) throw IoError("problem file '" + path + "': missing or zero n");

    DenseMatrix A(n, n, read_block(in, n * n, path));
    std::string marker;
    if (!(in >> marker) || marker != "b:")
        throw IoError("problem file '" + path + "': missing b block");
    Vector b = read_block(in, n, path);
    std::optional<Vector> xstar;
    if (in >> marker) {
        if (marker != "xstar:")
            throw IoError("problem file '" + path + "': unexpected block '" + marker + "'");
        xstar = read_block(in, n, path);
    }
    AveProblem p(std::move(A), std::move(b), std::move(xstar));
    p.generator = generator;
    p.seed = seed;
    return p;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory file '" + path + "'");
    const bool with_energy = !traj.energies.empty();
    const bool with_residual = !traj.residual_norms.empty();
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();

    out << "t";
    if (with_energy) out << ",V";
    if (with_residual) out << ",r_norm";
    for (std::size_t j = 0; j < n; ++j) out << ",x_" << (j + 1);
    out << "\n";

    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << format_full(traj.times[i]);
        if (with_energy) out << "," << format_full(traj.energies[i]);
        if (with_residual) out << "," << format_full(traj.residual_norms[i]);
        for (std::size_t j = 0; j < n; ++j) out << "," << format_full(traj.states[i][j]);
        out << "\n";
    }
    if (!out) throw IoError("failed writing trajectory file '" + path + "'");
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open csv file '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("csv file '" + path + "': empty");
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream row_in(line);
        while (std::getline(row_in, cell, ','))
            row.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : parse_double(cell, "csv cell"));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace avekit
