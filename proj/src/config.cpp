#include "hembem/config.hpp"

#include "hembem/error.hpp"
#include "hembem/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hembem {

void RunConfig::validate() const
{
    if (n0 < 1 || hp_n0 < 1 || eps_n0 < 1)
        throw ConfigError("mesh sizes must be positive");
    if (!(side > 0.0) || side >= 1.0 / std::sqrt(2.0))
        throw ConfigError("side must be positive and keep the domain inside the unit disc");
    Material(E, nu);
    law();
    if (!(eps > 0.0) || !(eps_fine > 0.0))
        throw ConfigError("regularization parameters must be positive");
    for (double e : eps_values)
        if (!(e > eps_fine))
            throw ConfigError("eps_values must exceed eps_fine");
    if (uniform_levels < 1)
        throw ConfigError("uniform_levels must be positive");
    if (error_cutoff < 1)
        throw ConfigError("error_cutoff must be at least 1 (the reference itself)");
    if (trace_points < 1)
        throw ConfigError("trace_points must be positive");
    if (!(solver.tol > 0.0) || solver.max_iter < 1)
        throw ConfigError("solver tolerance and iteration limit must be positive");
    adaptive.validate();
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    if (trim(v.substr(used)) != "")
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v)
{
    const double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 2e9)
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    return out;
}

Vec2 to_vec2(const std::string& key, const std::string& v)
{
    const auto l = to_list(key, v);
    if (l.size() != 2)
        throw ConfigError(key + ": expected two comma separated numbers");
    return {l[0], l[1]};
}

AdaptiveMode to_mode(const std::string& key, const std::string& v)
{
    if (v == "uniform")
        return AdaptiveMode::Uniform;
    if (v == "h")
        return AdaptiveMode::H;
    if (v == "hp")
        return AdaptiveMode::HP;
    throw ConfigError(key + ": expected uniform, h or hp");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"n0", [](RunConfig& c, auto& k, auto& v) { c.n0 = to_int(k, v); }},
        {"side", [](RunConfig& c, auto& k, auto& v) { c.side = to_double(k, v); }},
        {"E", [](RunConfig& c, auto& k, auto& v) { c.E = to_double(k, v); }},
        {"nu", [](RunConfig& c, auto& k, auto& v) { c.nu = to_double(k, v); }},
        {"traction_a", [](RunConfig& c, auto& k, auto& v) { c.traction_a = to_vec2(k, v); }},
        {"traction_b", [](RunConfig& c, auto& k, auto& v) { c.traction_b = to_vec2(k, v); }},
        {"traction_value", [](RunConfig& c, auto& k, auto& v) { c.traction_value = to_vec2(k, v); }},
        {"law_A1", [](RunConfig& c, auto& k, auto& v) { c.law_A1 = to_double(k, v); }},
        {"law_A2", [](RunConfig& c, auto& k, auto& v) { c.law_A2 = to_double(k, v); }},
        {"law_t1", [](RunConfig& c, auto& k, auto& v) { c.law_t1 = to_double(k, v); }},
        {"law_t2", [](RunConfig& c, auto& k, auto& v) { c.law_t2 = to_double(k, v); }},
        {"eps", [](RunConfig& c, auto& k, auto& v) { c.eps = to_double(k, v); }},
        {"gap", [](RunConfig& c, auto& k, auto& v) { c.gap = to_double(k, v); }},
        {"uniform_levels", [](RunConfig& c, auto& k, auto& v) { c.uniform_levels = to_int(k, v); }},
        {"theta", [](RunConfig& c, auto& k, auto& v) { c.adaptive.theta = to_double(k, v); }},
        {"delta", [](RunConfig& c, auto& k, auto& v) { c.adaptive.delta = to_double(k, v); }},
        {"max_iterations", [](RunConfig& c, auto& k, auto& v) { c.adaptive.max_iterations = to_int(k, v); }},
        {"max_dof", [](RunConfig& c, auto& k, auto& v) { c.adaptive.max_dof = to_int(k, v); }},
        {"adaptive_mode", [](RunConfig& c, auto& k, auto& v) { c.adaptive.mode = to_mode(k, v); }},
        {"hp_n0", [](RunConfig& c, auto& k, auto& v) { c.hp_n0 = to_int(k, v); }},
        {"eps_n0", [](RunConfig& c, auto& k, auto& v) { c.eps_n0 = to_int(k, v); }},
        {"eps_values", [](RunConfig& c, auto& k, auto& v) { c.eps_values = to_list(k, v); }},
        {"eps_fine", [](RunConfig& c, auto& k, auto& v) { c.eps_fine = to_double(k, v); }},
        {"error_cutoff", [](RunConfig& c, auto& k, auto& v) { c.error_cutoff = to_int(k, v); }},
        {"quad_regular_extra", [](RunConfig& c, auto& k, auto& v) { c.quadrature.regular_extra = to_int(k, v); }},
        {"quad_singular_extra", [](RunConfig& c, auto& k, auto& v) { c.quadrature.singular_extra = to_int(k, v); }},
        {"quad_angular_extra", [](RunConfig& c, auto& k, auto& v) { c.quadrature.angular_extra = to_int(k, v); }},
        {"quad_admissibility", [](RunConfig& c, auto& k, auto& v) { c.quadrature.admissibility = to_double(k, v); }},
        {"solver_tol", [](RunConfig& c, auto& k, auto& v) { c.solver.tol = to_double(k, v); }},
        {"solver_max_iter", [](RunConfig& c, auto& k, auto& v) { c.solver.max_iter = to_int(k, v); }},
        {"continuation", [](RunConfig& c, auto& k, auto& v) { c.solver.continuation = to_bool(k, v); }},
        {"continuation_eps", [](RunConfig& c, auto& k, auto& v) { c.solver.continuation_eps = to_list(k, v); }},
        {"keep_zero_rows", [](RunConfig& c, auto& k, auto& v) { c.keep_zero_rows = to_bool(k, v); }},
        {"norm_scaling",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "dual")
                 c.norm_scaling = NormScaling::Dual;
             else if (v == "printed")
                 c.norm_scaling = NormScaling::Printed;
             else
                 throw ConfigError(k + ": expected dual or printed");
         }},
        {"trace_points", [](RunConfig& c, auto& k, auto& v) { c.trace_points = to_int(k, v); }},
        {"solver_trace", [](RunConfig& c, auto& k, auto& v) { c.solver_trace = to_bool(k, v); }},
        {"dump_indicators", [](RunConfig& c, auto& k, auto& v) { c.dump_indicators = to_bool(k, v); }},
        {"seed", [](RunConfig& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
    };
    return table;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_number(v[i]);
    return s;
}

} // namespace

RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c)
{
    const char* modes[] = {"uniform", "h", "hp"};
    auto f = [](double v) { return format_number(v); };
    out << "n0 = " << c.n0 << "\nside = " << f(c.side) << "\nE = " << f(c.E) << "\nnu = " << f(c.nu)
        << "\ntraction_a = " << f(c.traction_a.x()) << ", " << f(c.traction_a.y())
        << "\ntraction_b = " << f(c.traction_b.x()) << ", " << f(c.traction_b.y())
        << "\ntraction_value = " << f(c.traction_value.x()) << ", " << f(c.traction_value.y())
        << "\nlaw_A1 = " << f(c.law_A1) << "\nlaw_A2 = " << f(c.law_A2) << "\nlaw_t1 = " << f(c.law_t1)
        << "\nlaw_t2 = " << f(c.law_t2) << "\neps = " << f(c.eps) << "\ngap = " << f(c.gap)
        << "\nuniform_levels = " << c.uniform_levels << "\ntheta = " << f(c.adaptive.theta)
        << "\ndelta = " << f(c.adaptive.delta) << "\nmax_iterations = " << c.adaptive.max_iterations
        << "\nmax_dof = " << c.adaptive.max_dof
        << "\nadaptive_mode = " << modes[static_cast<int>(c.adaptive.mode)] << "\nhp_n0 = " << c.hp_n0
        << "\neps_n0 = " << c.eps_n0 << "\neps_values = " << join(c.eps_values)
        << "\neps_fine = " << f(c.eps_fine) << "\nerror_cutoff = " << c.error_cutoff
        << "\nquad_regular_extra = " << c.quadrature.regular_extra
        << "\nquad_singular_extra = " << c.quadrature.singular_extra
        << "\nquad_angular_extra = " << c.quadrature.angular_extra
        << "\nquad_admissibility = " << f(c.quadrature.admissibility) << "\nsolver_tol = " << f(c.solver.tol)
        << "\nsolver_max_iter = " << c.solver.max_iter
        << "\ncontinuation = " << (c.solver.continuation ? "true" : "false")
        << "\ncontinuation_eps = " << join(c.solver.continuation_eps)
        << "\nkeep_zero_rows = " << (c.keep_zero_rows ? "true" : "false")
        << "\nnorm_scaling = " << (c.norm_scaling == NormScaling::Dual ? "dual" : "printed")
        << "\ntrace_points = " << c.trace_points << "\nsolver_trace = " << (c.solver_trace ? "true" : "false")
        << "\ndump_indicators = " << (c.dump_indicators ? "true" : "false") << "\nseed = " << c.seed << '\n';
}

} // namespace hembem
