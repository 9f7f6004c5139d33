#include "qpb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpb {

std::string format_double(double v) {
    char buf[48];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xF];
        h >>= 4;
    }
    return s;
}

void write_field_csv(const std::filesystem::path& path,
                     const CoefficientField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (int j = 1; j <= field.dimension(); ++j)
        out << 'n' << j << ',';
    out << "re,im\n";
    for (const auto& [n, c] : field.entries()) {
        if (c == cplx{0.0, 0.0}) continue;
        for (int v : n.comp) out << v << ',';
        out << format_double(c.real()) << ',' << format_double(c.imag())
            << '\n';
    }
}

void write_field_meta(const std::filesystem::path& path,
                      const FrequencySystem& fs, int radius) {
    nlohmann::ordered_json j;
    j["nu"] = fs.dimension();
    j["omega"] = std::vector<double>(fs.omega().begin(), fs.omega().end());
    j["radius"] = radius;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

CoefficientField read_field_csv(const std::filesystem::path& path, int nu,
                                int radius) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty field file " + path.string());
    CoefficientField field(nu, radius);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<int> comp;
        for (int j = 0; j < nu; ++j) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("short row in " + path.string());
            comp.push_back(std::stoi(cell));
        }
        if (!std::getline(ss, cell, ','))
            throw std::runtime_error("short row in " + path.string());
        const double re = std::stod(cell);
        if (!std::getline(ss, cell, ','))
            throw std::runtime_error("short row in " + path.string());
        const double im = std::stod(cell);
        field.set(MultiIndex(std::move(comp)), cplx{re, im});
    }
    return field;
}

std::vector<std::string> write_trajectory(const std::filesystem::path& dir,
                                          const TrajectoryField& traj,
                                          double tol, int kmax,
                                          const PicardDiagnostics& diag) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    const int J = traj.grid.intervals();
    int width = 1;
    for (int v = J; v >= 10; v /= 10) ++width;
    for (int j = 0; j <= J; ++j) {
        std::string name = std::to_string(j);
        name.insert(0, width - name.size(), '0');
        name = "node_" + name + ".csv";
        write_field_csv(dir / name, traj.fields[j]);
        files.push_back(name);
    }
    nlohmann::ordered_json j;
    j["t_end"] = traj.grid.t_end();
    j["J"] = J;
    j["tol"] = tol;
    j["kmax"] = kmax;
    j["converged"] = diag.converged;
    j["deltas"] = diag.deltas;
    std::ofstream out(dir / "trajectory.json", std::ios::binary);
    out << j.dump(2) << '\n';
    files.push_back("trajectory.json");
    return files;
}

nlohmann::ordered_json report_to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["name"] = report.name;
    j["threshold"] = report.threshold;
    j["worst"] = report.worst;
    j["margin"] = report.margin;
    j["abs_tol"] = report.abs_tol;
    j["pass"] = report.pass;
    return j;
}

}  // namespace qpb
