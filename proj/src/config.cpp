#include "qpb/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qpb/bounds.hpp"

namespace qpb {

namespace {

const std::set<std::string> kKnownKeys = {
    "nu",   "omega", "N",    "B",    "kappa",            "seed",
    "t_end", "J",     "tol",  "kmax", "threshold_divisor", "real_data"};

std::vector<double> parse_omega_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    for (const auto& [key, value] : j.items())
        if (!kKnownKeys.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
    if (j.contains("nu")) c.nu = j.at("nu").get<int>();
    if (j.contains("omega")) c.omega = j.at("omega").get<std::vector<double>>();
    if (j.contains("N")) c.N = j.at("N").get<int>();
    if (j.contains("B")) c.B = j.at("B").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("t_end")) {
        const auto& t = j.at("t_end");
        if (t.is_string()) {
            if (t.get<std::string>() != "auto")
                throw std::invalid_argument("config: t_end must be a number or \"auto\"");
            c.t_end.reset();
        } else {
            c.t_end = t.get<double>();
        }
    }
    if (j.contains("J")) c.J = j.at("J").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("kmax")) c.kmax = j.at("kmax").get<int>();
    if (j.contains("threshold_divisor"))
        c.threshold_divisor = j.at("threshold_divisor").get<int>();
    if (j.contains("real_data")) c.real_data = j.at("real_data").get<bool>();
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void RunConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like KEY=VAL: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string val = assignment.substr(eq + 1);
    if (key == "nu") nu = std::stoi(val);
    else if (key == "omega") omega = parse_omega_list(val);
    else if (key == "N") N = std::stoi(val);
    else if (key == "B") B = std::stod(val);
    else if (key == "kappa") kappa = std::stod(val);
    else if (key == "seed") seed = std::stoull(val);
    else if (key == "t_end") {
        if (val == "auto") t_end.reset();
        else t_end = std::stod(val);
    } else if (key == "J") J = std::stoi(val);
    else if (key == "tol") tol = std::stod(val);
    else if (key == "kmax") kmax = std::stoi(val);
    else if (key == "threshold_divisor") threshold_divisor = std::stoi(val);
    else if (key == "real_data") real_data = (val == "true" || val == "1");
    else throw std::invalid_argument("override: unknown key '" + key + "'");
    validate();
}

void RunConfig::validate() const {
    if (nu < 1) throw std::invalid_argument("config: nu must be >= 1");
    if (static_cast<int>(omega.size()) != nu)
        throw std::invalid_argument("config: omega must have nu entries");
    if (N < 1) throw std::invalid_argument("config: N must be >= 1");
    if (!(B > 0.0)) throw std::invalid_argument("config: B must be > 0");
    if (!(kappa > 0.0) || kappa > 1.0)
        throw std::invalid_argument("config: kappa must lie in (0,1]");
    if (t_end && !(*t_end > 0.0))
        throw std::invalid_argument("config: t_end must be positive");
    if (J < 2 || J % 2 != 0)
        throw std::invalid_argument("config: J must be even and >= 2");
    if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
    if (kmax < 1) throw std::invalid_argument("config: kmax must be >= 1");
    if (threshold_divisor != 24 && threshold_divisor != 48 &&
        threshold_divisor != 96 && threshold_divisor != 192)
        throw std::invalid_argument("config: threshold_divisor must be 24, 48, 96 or 192");
}

FrequencySystem RunConfig::frequency_system() const {
    return FrequencySystem(omega, N);
}

double RunConfig::resolve_t_end(const FrequencySystem& fs) const {
    if (t_end) return *t_end;
    return existence_time(DecayEnvelope(B, kappa), fs, threshold_divisor);
}

nlohmann::ordered_json RunConfig::to_json(
    std::optional<double> resolved_t_end) const {
    nlohmann::ordered_json j;
    j["nu"] = nu;
    j["omega"] = omega;
    j["N"] = N;
    j["B"] = B;
    j["kappa"] = kappa;
    j["seed"] = seed;
    if (resolved_t_end)
        j["t_end"] = *resolved_t_end;
    else if (t_end)
        j["t_end"] = *t_end;
    else
        j["t_end"] = "auto";
    j["J"] = J;
    j["tol"] = tol;
    j["kmax"] = kmax;
    j["threshold_divisor"] = threshold_divisor;
    j["real_data"] = real_data;
    return j;
}

}  // namespace qpb
