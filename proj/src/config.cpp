#include "cnslab/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "cnslab/csv.hpp"
#include "cnslab/errors.hpp"

namespace cnslab {

namespace {

[[noreturn]] void bad(const std::string& msg) {
    throw Error(ErrorCode::config_error, msg);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') bad("key " + key + ": not a number: " + v);
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    double x = to_double(key, v);
    if (x != std::floor(x)) bad("key " + key + ": not an integer: " + v);
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad("key " + key + ": not a boolean: " + v);
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (double x : to_double_list(key, v)) out.push_back(static_cast<int>(x));
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_double(xs[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

void apply_key_value(RunConfig& c, const std::string& key, const std::string& raw) {
    std::string v = trim(raw);
    if (key == "subcommand") c.subcommand = v;
    else if (key == "gamma") c.params.gamma = to_double(key, v);
    else if (key == "A") c.params.A = to_double(key, v);
    else if (key == "mu") c.params.mu = to_double(key, v);
    else if (key == "lambda") c.params.lambda = to_double(key, v);
    else if (key == "n") c.params.n = to_int(key, v);
    else if (key == "r_min") c.r_min = to_double(key, v);
    else if (key == "r_max") c.r_max = to_double(key, v);
    else if (key == "cells") c.cells = to_int(key, v);
    else if (key == "bc_inner") c.bc_inner = v;
    else if (key == "bc_outer") c.bc_outer = v;
    else if (key == "scenario") c.scenario = v;
    else if (key == "state_file") c.state_file = v;
    else if (key == "rho0") c.rho0 = to_double(key, v);
    else if (key == "bump_base") c.bump_base = to_double(key, v);
    else if (key == "bump_amp") c.bump_amp = to_double(key, v);
    else if (key == "bump_center") c.bump_center = to_double(key, v);
    else if (key == "bump_width") c.bump_width = to_double(key, v);
    else if (key == "T") c.blowup_time = to_double(key, v);
    else if (key == "cfl") c.cfl = to_double(key, v);
    else if (key == "floor") c.density_floor = to_double(key, v);
    else if (key == "dt_min") c.dt_min = to_double(key, v);
    else if (key == "t_end") c.t_end = to_double(key, v);
    else if (key == "snapshots") c.snapshots = to_double_list(key, v);
    else if (key == "q") c.q = to_double(key, v);
    else if (key == "p") c.p = to_double(key, v);
    else if (key == "t_ref") c.t_ref = to_double(key, v);
    else if (key == "effective_flux") c.effective_flux = to_bool(key, v);
    else if (key == "flux_bc") c.flux_bc = v;
    else if (key == "out_dir") c.out_dir = v;
    else if (key == "kappa") c.kappa = to_double(key, v);
    else if (key == "t1") c.t1 = to_double(key, v);
    else if (key == "t2") c.t2 = to_double(key, v);
    else if (key == "levels") c.levels = to_int_list(key, v);
    else if (key == "interp_order") c.interp_order = to_int(key, v);
    else if (key == "gamma_list") c.gamma_list = to_double_list(key, v);
    else if (key == "sample_r_lo") c.sample_r_lo = to_double(key, v);
    else if (key == "sample_r_hi") c.sample_r_hi = to_double(key, v);
    else if (key == "sample_nr") c.sample_nr = to_int(key, v);
    else if (key == "sample_t_lo") c.sample_t_lo = to_double(key, v);
    else if (key == "sample_t_hi") c.sample_t_hi = to_double(key, v);
    else if (key == "sample_nt") c.sample_nt = to_int(key, v);
    else if (key == "h_fd") c.h_fd = to_double(key, v);
    else if (key == "obstruction_p") c.obstruction_p = to_double(key, v);
    else if (key == "obstruction_radius") c.obstruction_radius = to_double(key, v);
    else if (key == "y_lo") c.y_lo = to_double(key, v);
    else if (key == "y_hi") c.y_hi = to_double(key, v);
    else if (key == "ny") c.ny = to_int(key, v);
    else if (key == "input") c.input = v;
    else if (key == "fit_lo") c.fit_lo = to_double(key, v);
    else if (key == "fit_hi") c.fit_hi = to_double(key, v);
    else bad("unknown config key: " + key);
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            bad(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        apply_key_value(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> e;
    auto put = [&](const std::string& k, const std::string& v) { e.emplace_back(k, v); };
    put("subcommand", c.subcommand);
    put("gamma", format_double(c.params.gamma));
    put("A", format_double(c.params.A));
    put("mu", format_double(c.params.mu));
    put("lambda", format_double(c.params.lambda));
    put("n", std::to_string(c.params.n));
    put("r_min", format_double(c.r_min));
    put("r_max", format_double(c.r_max));
    put("cells", std::to_string(c.cells));
    put("bc_inner", c.bc_inner);
    put("bc_outer", c.bc_outer);
    put("scenario", c.scenario);
    if (!c.state_file.empty()) put("state_file", c.state_file);
    put("rho0", format_double(c.rho0));
    put("bump_base", format_double(c.bump_base));
    put("bump_amp", format_double(c.bump_amp));
    if (c.bump_center) put("bump_center", format_double(*c.bump_center));
    if (c.bump_width) put("bump_width", format_double(*c.bump_width));
    put("T", format_double(c.blowup_time));
    put("cfl", format_double(c.cfl));
    put("floor", format_double(c.density_floor));
    put("dt_min", format_double(c.dt_min));
    put("t_end", format_double(c.t_end));
    if (!c.snapshots.empty()) put("snapshots", join_doubles(c.snapshots));
    put("q", format_double(c.q));
    put("p", format_double(c.p));
    if (c.t_ref) put("t_ref", format_double(*c.t_ref));
    put("effective_flux", c.effective_flux ? "true" : "false");
    put("flux_bc", c.flux_bc);
    put("out_dir", c.out_dir);
    put("kappa", format_double(c.kappa));
    put("t1", format_double(c.t1));
    put("t2", format_double(c.t2));
    put("levels", join_ints(c.levels));
    put("interp_order", std::to_string(c.interp_order));
    put("gamma_list", join_doubles(c.gamma_list));
    put("sample_r_lo", format_double(c.sample_r_lo));
    put("sample_r_hi", format_double(c.sample_r_hi));
    put("sample_nr", std::to_string(c.sample_nr));
    put("sample_t_lo", format_double(c.sample_t_lo));
    if (c.sample_t_hi) put("sample_t_hi", format_double(*c.sample_t_hi));
    put("sample_nt", std::to_string(c.sample_nt));
    put("h_fd", format_double(c.h_fd));
    put("obstruction_p", format_double(c.obstruction_p));
    put("obstruction_radius", format_double(c.obstruction_radius));
    put("y_lo", format_double(c.y_lo));
    put("y_hi", format_double(c.y_hi));
    put("ny", std::to_string(c.ny));
    if (!c.input.empty()) put("input", c.input);
    if (c.fit_lo) put("fit_lo", format_double(*c.fit_lo));
    if (c.fit_hi) put("fit_hi", format_double(*c.fit_hi));
    return e;
}

void validate(const RunConfig& c) {
    try {
        validate(c.params);
    } catch (const Error& e) {
        bad(e.what());  // a bad parameter in a config is a config error
    }
    if (!(c.r_max > c.r_min) || !(c.r_min >= 0.0)) bad("need 0 <= r_min < r_max");
    if (c.cells < 4) bad("need at least 4 cells");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) bad("cfl must lie in (0, 1]");
    if (!(c.density_floor > 0.0)) bad("density floor must be positive");
    for (const auto& b : {c.bc_inner, c.bc_outer}) {
        if (b != "auto" && b != "wall" && b != "axis" && b != "outflow" && b != "exact") {
            bad("unknown boundary kind: " + b);
        }
    }
    if (c.scenario != "rest" && c.scenario != "gaussian-bump" &&
        c.scenario != "exact-forced" && c.scenario != "custom-from-file") {
        bad("unknown scenario: " + c.scenario);
    }
    if (c.scenario == "custom-from-file") {
        if (c.state_file.empty()) bad("custom-from-file needs state_file");
        if (!std::filesystem::exists(c.state_file)) {
            bad("state_file does not exist: " + c.state_file);
        }
    }
    if (c.flux_bc != "auto" && c.flux_bc != "bounded" && c.flux_bc != "free") {
        bad("flux_bc must be auto, bounded or free");
    }
    if (c.interp_order != 1 && c.interp_order != 3) bad("interp_order must be 1 or 3");
    if (c.subcommand == "diagnose") {
        if (c.input.empty()) bad("diagnose needs input (a diagnostics CSV)");
        if (!std::filesystem::exists(c.input)) bad("input does not exist: " + c.input);
    }
}

}  // namespace cnslab
