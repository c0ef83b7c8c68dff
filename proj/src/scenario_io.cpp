#include "flowsim/scenario_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace flowsim {

namespace {

using Code = ConfigErrorCode;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
    throw ConfigError(Code::BadField, field, msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
        bad(field, "expected a number, got '" + v + "'");
    }
    return x;
}

long long parse_int(const std::string& field, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
        bad(field, "expected an integer, got '" + v + "'");
    }
    return x;
}

std::uint64_t parse_u64(const std::string& field, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
        bad(field, "expected an unsigned integer, got '" + v + "'");
    }
    return x;
}

Matrix2 parse_matrix(const std::string& field, const std::string& v) {
    std::vector<double> vals;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        vals.push_back(parse_double(field, trim(item)));
    }
    if (vals.size() != 4) bad(field, "expected 4 comma-separated numbers (row-major 2x2)");
    return {vals[0], vals[1], vals[2], vals[3]};
}

std::vector<MbcmWeight> parse_weights(const std::string& field, const std::string& v) {
    std::vector<MbcmWeight> out;
    if (trim(v) == "none") return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos) bad(field, "expected offset:weight entries");
        const long long off = parse_int(field, trim(item.substr(0, colon)));
        const double w = parse_double(field, trim(item.substr(colon + 1)));
        out.push_back({static_cast<int>(off), w});
    }
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_matrix(const Matrix2& m) {
    return fmt(m.m00) + ", " + fmt(m.m01) + ", " + fmt(m.m10) + ", " + fmt(m.m11);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool r_explicit = false, error_fraction_set = false;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') bad("line " + std::to_string(lineno), "unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "gains" && section != "mbcm" && section != "perturbation" &&
                section != "kalman") {
                bad(section, "unknown section");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad("line " + std::to_string(lineno), "expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string qual = section.empty() ? key : section + "." + key;

        if (section.empty()) {
            if (key == "n_vehicles") cfg.n_vehicles = static_cast<int>(parse_int(qual, val));
            else if (key == "road_length_m") cfg.road_length = parse_double(qual, val);
            else if (key == "vehicle_length_m") cfg.vehicle_length = parse_double(qual, val);
            else if (key == "initial_spacing_m") cfg.initial_spacing = parse_double(qual, val);
            else if (key == "initial_velocity_mps") cfg.initial_velocity = parse_double(qual, val);
            else if (key == "dt_s") cfg.dt = parse_double(qual, val);
            else if (key == "total_duration_s") cfg.total_duration = parse_double(qual, val);
            else if (key == "fm_warmup_s") cfg.fm_warmup = parse_double(qual, val);
            else if (key == "controller") {
                if (!controller_from_string(val, cfg.controller)) {
                    bad(qual, "controller must be fm|bcm|mbcm|pbcm");
                }
            } else if (key == "error_fraction") {
                cfg.error_fraction = parse_double(qual, val);
                error_fraction_set = true;
            } else if (key == "noise_model") {
                if (val == "multiplicative") cfg.noise_model = NoiseModel::Multiplicative;
                else if (val == "additive") cfg.noise_model = NoiseModel::Additive;
                else bad(qual, "noise_model must be multiplicative|additive");
            } else if (key == "delay_ticks") {
                cfg.delay_ticks = static_cast<int>(parse_int(qual, val));
            } else if (key == "rng_seed") {
                cfg.rng_seed = parse_u64(qual, val);
            } else {
                bad(qual, "unknown key");
            }
        } else if (section == "gains") {
            if (key == "k_d") cfg.gains.k_d = parse_double(qual, val);
            else if (key == "k_v") cfg.gains.k_v = parse_double(qual, val);
            else if (key == "k_c") cfg.gains.k_c = parse_double(qual, val);
            else if (key == "v_des_mps") cfg.gains.v_des = parse_double(qual, val);
            else if (key == "p_des_m") cfg.gains.p_des = parse_double(qual, val);
            else bad(qual, "unknown key");
        } else if (section == "mbcm") {
            if (key == "weights") cfg.mbcm_weights = parse_weights(qual, val);
            else bad(qual, "unknown key");
        } else if (section == "perturbation") {
            if (key == "vehicle_index") {
                cfg.perturbation.vehicle_index = static_cast<int>(parse_int(qual, val));
            } else if (key == "start_time_s") {
                cfg.perturbation.start_time_s = parse_double(qual, val);
            } else if (key == "duration_s") {
                cfg.perturbation.duration_s = parse_double(qual, val);
            } else if (key == "acceleration_mps2") {
                cfg.perturbation.acceleration = parse_double(qual, val);
            } else {
                bad(qual, "unknown key");
            }
        } else {  // kalman
            if (key == "q") cfg.kalman.q = parse_matrix(qual, val);
            else if (key == "r") { cfg.kalman.r = parse_matrix(qual, val); r_explicit = true; }
            else if (key == "p0") cfg.kalman.p0 = parse_matrix(qual, val);
            else bad(qual, "unknown key");
        }
    }

    // An error_fraction override without an explicit R re-derives the default
    // measurement covariance at the new noise level.
    if (error_fraction_set && !r_explicit) {
        cfg.kalman.r = default_measurement_covariance(cfg.error_fraction);
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path, const ScenarioConfig& base) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError(ConfigErrorCode::BadField, "config",
                          "cannot open scenario file: " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str(), base);
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "# flowsim scenario\n";
    out << "n_vehicles = " << cfg.n_vehicles << "\n";
    out << "road_length_m = " << fmt(cfg.road_length) << "\n";
    out << "vehicle_length_m = " << fmt(cfg.vehicle_length) << "\n";
    out << "initial_spacing_m = " << fmt(cfg.initial_spacing) << "\n";
    out << "initial_velocity_mps = " << fmt(cfg.initial_velocity) << "\n";
    out << "dt_s = " << fmt(cfg.dt) << "\n";
    out << "total_duration_s = " << fmt(cfg.total_duration) << "\n";
    out << "fm_warmup_s = " << fmt(cfg.fm_warmup) << "\n";
    out << "controller = " << to_string(cfg.controller) << "\n";
    out << "error_fraction = " << fmt(cfg.error_fraction) << "\n";
    out << "noise_model = "
        << (cfg.noise_model == NoiseModel::Multiplicative ? "multiplicative" : "additive")
        << "\n";
    out << "delay_ticks = " << cfg.delay_ticks << "\n";
    out << "rng_seed = " << cfg.rng_seed << "\n";
    out << "\n[gains]\n";
    out << "k_d = " << fmt(cfg.gains.k_d) << "\n";
    out << "k_v = " << fmt(cfg.gains.k_v) << "\n";
    out << "k_c = " << fmt(cfg.gains.k_c) << "\n";
    out << "v_des_mps = " << fmt(cfg.gains.v_des) << "\n";
    out << "p_des_m = " << fmt(cfg.gains.p_des) << "\n";
    out << "\n[mbcm]\n";
    out << "weights = ";
    if (cfg.mbcm_weights.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < cfg.mbcm_weights.size(); ++i) {
            if (i) out << ", ";
            out << cfg.mbcm_weights[i].offset << ":" << fmt(cfg.mbcm_weights[i].weight);
        }
    }
    out << "\n";
    out << "\n[perturbation]\n";
    out << "vehicle_index = " << cfg.perturbation.vehicle_index << "\n";
    out << "start_time_s = " << fmt(cfg.perturbation.start_time_s) << "\n";
    out << "duration_s = " << fmt(cfg.perturbation.duration_s) << "\n";
    out << "acceleration_mps2 = " << fmt(cfg.perturbation.acceleration) << "\n";
    out << "\n[kalman]\n";
    out << "q = " << fmt_matrix(cfg.kalman.q) << "\n";
    out << "r = " << fmt_matrix(cfg.kalman.r) << "\n";
    out << "p0 = " << fmt_matrix(cfg.kalman.p0) << "\n";
    return out.str();
}

}  // namespace flowsim
