// SPDX-License-Identifier: Apache-2.0
//
// irscpd - structured tensor channel estimation for IRS-assisted mmWave OFDM
// Copyright (C) 2026 The irscpd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irscpd/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

#include <fmt/format.h>
#include <json.hpp>

namespace irscpd::io
{

namespace
{

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string &key, const std::string &what)
{
    throw std::invalid_argument(fmt::format("key '{}': {}", key, what));
}

void require_object(const json &j, const std::string &key)
{
    if (!j.is_object())
        bad(key, "expected an object");
}

int get_int(const json &j, const std::string &key)
{
    if (!j.is_number_integer())
        bad(key, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        bad(key, "integer out of range");
    return static_cast<int>(v);
}

std::uint64_t get_u64(const json &j, const std::string &key)
{
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    bad(key, "expected a non-negative integer");
}

double get_double(const json &j, const std::string &key)
{
    if (!j.is_number())
        bad(key, "expected a number");
    return j.get<double>();
}

// Numbers, or null for +infinity (JSON has no infinity literal).
double get_double_or_inf(const json &j, const std::string &key)
{
    if (j.is_null())
        return std::numeric_limits<double>::infinity();
    return get_double(j, key);
}

// Non-finite values are written as null.
json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

// NaN on read for null (parameters an estimator did not produce).
double get_double_or_nan(const json &j, const std::string &key)
{
    if (j.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return get_double(j, key);
}

std::string get_string(const json &j, const std::string &key)
{
    if (!j.is_string())
        bad(key, "expected a string");
    return j.get<std::string>();
}

bool get_bool(const json &j, const std::string &key)
{
    if (!j.is_boolean())
        bad(key, "expected true or false");
    return j.get<bool>();
}

const json &at(const json &obj, const std::string &key, const std::string &where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        bad(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

json complex_json(cd z)
{
    return json::array({number(z.real()), number(z.imag())});
}

cd get_complex(const json &j, const std::string &key)
{
    if (!j.is_array() || j.size() != 2)
        bad(key, "expected [re, im]");
    return {get_double_or_nan(j[0], key), get_double_or_nan(j[1], key)};
}

json matrix_json(const ComplexMatrix &m)
{
    json data = json::array();
    for (Index i = 0; i < m.size(); ++i)
        data.push_back(complex_json(m.data()[i]));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix get_matrix(const json &j, const std::string &key)
{
    require_object(j, key);
    const int rows = get_int(at(j, "rows", key), key + ".rows");
    const int cols = get_int(at(j, "cols", key), key + ".cols");
    const json &data = at(j, "data", key);
    if (rows < 0 || cols < 0 || !data.is_array() ||
        data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        bad(key, "data length does not match rows x cols");
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i)
        m.data()[i] = get_complex(data[static_cast<std::size_t>(i)], key + ".data");
    return m;
}

json tensor_json(const ComplexTensor3 &t)
{
    json data = json::array();
    for (cd z : t.data())
        data.push_back(complex_json(z));
    return json{{"dims", json::array({t.dim(0), t.dim(1), t.dim(2)})}, {"data", std::move(data)}};
}

ComplexTensor3 get_tensor(const json &j, const std::string &key)
{
    require_object(j, key);
    const json &dims = at(j, "dims", key);
    if (!dims.is_array() || dims.size() != 3)
        bad(key + ".dims", "expected three dimensions");
    ComplexTensor3 t(get_int(dims[0], key + ".dims"), get_int(dims[1], key + ".dims"),
                     get_int(dims[2], key + ".dims"));
    const json &data = at(j, "data", key);
    auto span = t.data();
    if (!data.is_array() || data.size() != span.size())
        bad(key, "data length does not match dims");
    for (std::size_t i = 0; i < span.size(); ++i)
        span[i] = get_complex(data[i], key + ".data");
    return t;
}

using SystemField = std::variant<int SystemConfig::*, double SystemConfig::*>;

const std::vector<std::pair<const char *, SystemField>> &system_fields()
{
    static const std::vector<std::pair<const char *, SystemField>> fields{
        {"n_bs", &SystemConfig::n_bs},
        {"mx", &SystemConfig::mx},
        {"my", &SystemConfig::my},
        {"rf_chains", &SystemConfig::rf_chains},
        {"p0", &SystemConfig::p0},
        {"p", &SystemConfig::p},
        {"q", &SystemConfig::q},
        {"t", &SystemConfig::t},
        {"fs", &SystemConfig::fs},
        {"fc", &SystemConfig::fc},
        {"l", &SystemConfig::l},
        {"lr", &SystemConfig::lr},
        {"d1", &SystemConfig::d1},
        {"d2_min", &SystemConfig::d2_min},
        {"d2_max", &SystemConfig::d2_max},
        {"max_path_delay", &SystemConfig::max_path_delay},
    };
    return fields;
}

json system_json(const SystemConfig &cfg)
{
    json j = json::object();
    for (const auto &[name, field] : system_fields())
        std::visit([&](auto ptr) { j[name] = cfg.*ptr; }, field);
    return j;
}

SystemConfig system_from(const json &j, const std::string &where)
{
    require_object(j, where);
    SystemConfig cfg;
    for (const auto &[key, value] : j.items())
    {
        const std::string path = where + "." + key;
        bool found = false;
        for (const auto &[name, field] : system_fields())
        {
            if (key != name)
                continue;
            found = true;
            if (std::holds_alternative<int SystemConfig::*>(field))
                cfg.*std::get<int SystemConfig::*>(field) = get_int(value, path);
            else
                cfg.*std::get<double SystemConfig::*>(field) = get_double(value, path);
        }
        if (!found)
            bad(path, "unknown key");
    }
    return cfg;
}

json grid_json(const somp::GridSpec &g)
{
    return json{{"irs_a", g.irs_a}, {"irs_e", g.irs_e}, {"bs", g.bs}, {"delay", g.delay}};
}

somp::GridSpec grid_from(const json &j, const std::string &where)
{
    require_object(j, where);
    somp::GridSpec g;
    for (const auto &[key, value] : j.items())
    {
        const std::string path = where + "." + key;
        if (key == "irs_a")
            g.irs_a = get_int(value, path);
        else if (key == "irs_e")
            g.irs_e = get_int(value, path);
        else if (key == "bs")
            g.bs = get_int(value, path);
        else if (key == "delay")
            g.delay = get_int(value, path);
        else
            bad(path, "unknown key");
    }
    return g;
}

json angle_json(const AngleSearchOptions &o)
{
    return json{{"oversample", o.oversample},
                {"candidates", o.candidates},
                {"candidate_ratio", o.candidate_ratio},
                {"max_candidates", o.max_candidates},
                {"max_sweeps", o.max_sweeps},
                {"tolerance", o.tolerance},
                {"newton_steps", o.newton_steps}};
}

AngleSearchOptions angle_from(const json &j, const std::string &where)
{
    require_object(j, where);
    AngleSearchOptions o;
    for (const auto &[key, value] : j.items())
    {
        const std::string path = where + "." + key;
        if (key == "oversample")
            o.oversample = get_int(value, path);
        else if (key == "candidates")
            o.candidates = get_int(value, path);
        else if (key == "candidate_ratio")
            o.candidate_ratio = get_double(value, path);
        else if (key == "max_candidates")
            o.max_candidates = get_int(value, path);
        else if (key == "max_sweeps")
            o.max_sweeps = get_int(value, path);
        else if (key == "tolerance")
            o.tolerance = get_double(value, path);
        else if (key == "newton_steps")
            o.newton_steps = get_int(value, path);
        else
            bad(path, "unknown key");
    }
    return o;
}

json parse_text(const std::string &text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(fmt::format("malformed JSON: {}", e.what()));
    }
}

json composite_json(const CompositePath &c)
{
    return json{{"beta", complex_json(c.beta)}, {"iota", number(c.iota)},
                {"omega_a", number(c.omega_a)}, {"omega_e", number(c.omega_e)},
                {"phi", number(c.phi)}, {"m", c.m}, {"n", c.n}};
}

CompositePath composite_from(const json &j, const std::string &where)
{
    require_object(j, where);
    CompositePath c;
    c.beta = get_complex(at(j, "beta", where), where + ".beta");
    c.iota = get_double_or_nan(at(j, "iota", where), where + ".iota");
    c.omega_a = get_double_or_nan(at(j, "omega_a", where), where + ".omega_a");
    c.omega_e = get_double_or_nan(at(j, "omega_e", where), where + ".omega_e");
    c.phi = get_double_or_nan(at(j, "phi", where), where + ".phi");
    c.m = get_int(at(j, "m", where), where + ".m");
    c.n = get_int(at(j, "n", where), where + ".n");
    return c;
}

} // namespace

SystemConfig parse_system_config(const std::string &json_text)
{
    return system_from(parse_text(json_text), "system");
}

std::string system_config_to_json(const SystemConfig &cfg)
{
    return system_json(cfg).dump(2);
}

eval::ExperimentConfig parse_experiment_config(const std::string &json_text)
{
    const json j = parse_text(json_text);
    require_object(j, "<root>");
    eval::ExperimentConfig cfg;
    for (const auto &[key, value] : j.items())
    {
        if (key == "system")
            cfg.system = system_from(value, key);
        else if (key == "axis")
            cfg.axis = eval::parse_sweep_axis(get_string(value, key));
        else if (key == "values")
        {
            if (!value.is_array())
                bad(key, "expected an array");
            cfg.axis_values.clear();
            for (const auto &v : value)
                cfg.axis_values.push_back(get_double_or_inf(v, key));
        }
        else if (key == "snr_db")
            cfg.snr_db = get_double_or_inf(value, key);
        else if (key == "trials")
            cfg.trials = get_int(value, key);
        else if (key == "methods")
        {
            if (!value.is_array())
                bad(key, "expected an array");
            cfg.methods.clear();
            for (const auto &v : value)
                cfg.methods.push_back(get_string(v, key));
        }
        else if (key == "rank_mode")
            cfg.rank_mode = eval::parse_rank_mode(get_string(value, key));
        else if (key == "seed")
            cfg.seed = get_u64(value, key);
        else if (key == "output")
            cfg.output = get_string(value, key);
        else if (key == "somp_coarse")
            cfg.somp_coarse = grid_from(value, key);
        else if (key == "somp_fine")
            cfg.somp_fine = grid_from(value, key);
        else if (key == "angle_search")
            cfg.angle_search = angle_from(value, key);
        else if (key == "timing")
            cfg.timing = get_bool(value, key);
        else
            bad(key, "unknown key");
    }
    return cfg;
}

eval::ExperimentConfig load_experiment_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open config file '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

std::string experiment_config_to_json(const eval::ExperimentConfig &cfg)
{
    json values = json::array();
    for (double v : cfg.axis_values)
        values.push_back(number(v));
    json j{{"system", system_json(cfg.system)},
           {"axis", eval::to_string(cfg.axis)},
           {"values", std::move(values)},
           {"snr_db", number(cfg.snr_db)},
           {"trials", cfg.trials},
           {"methods", cfg.methods},
           {"rank_mode", eval::to_string(cfg.rank_mode)},
           {"seed", cfg.seed},
           {"output", cfg.output},
           {"somp_coarse", grid_json(cfg.somp_coarse)},
           {"somp_fine", grid_json(cfg.somp_fine)},
           {"angle_search", angle_json(cfg.angle_search)},
           {"timing", cfg.timing}};
    return j.dump(2);
}

void write_instance(std::ostream &os, const eval::Instance &inst)
{
    json bs_irs = json::array();
    for (const auto &p : inst.paths.bs_irs)
        bs_irs.push_back(json{{"alpha", complex_json(p.alpha)}, {"phi", p.phi},
                              {"theta_a", p.theta_a}, {"theta_e", p.theta_e}, {"tau", p.tau}});
    json irs_user = json::array();
    for (const auto &p : inst.paths.irs_user)
        irs_user.push_back(json{{"rho", complex_json(p.rho)}, {"chi_a", p.chi_a},
                                {"chi_e", p.chi_e}, {"kappa", p.kappa}, {"d2", p.d2}});
    json truth = json::array();
    for (const auto &c : inst.truth)
        truth.push_back(composite_json(c));

    const json j{{"format", "irscpd-instance"},
                 {"version", kInstanceFormatVersion},
                 {"system", system_json(inst.system)},
                 {"trial_seed", inst.trial_seed},
                 {"axis_index", inst.axis_index},
                 {"snr_db", number(inst.rx.snr_db)},
                 {"paths", json{{"bs_irs", std::move(bs_irs)}, {"irs_user", std::move(irs_user)}}},
                 {"truth", std::move(truth)},
                 {"training", json{{"v", matrix_json(inst.training.v)},
                                   {"f", matrix_json(inst.training.f)}}},
                 {"y", tensor_json(inst.rx.y)},
                 {"noise", tensor_json(inst.rx.noise)}};
    os << j.dump() << '\n';
}

eval::Instance read_instance(std::istream &is)
{
    json j;
    try
    {
        j = json::parse(is);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(fmt::format("malformed instance file: {}", e.what()));
    }
    require_object(j, "<root>");
    if (get_string(at(j, "format", ""), "format") != "irscpd-instance")
        bad("format", "not an irscpd instance file");
    const int version = get_int(at(j, "version", ""), "version");
    if (version != kInstanceFormatVersion)
        bad("version", fmt::format("unsupported version {}", version));

    eval::Instance inst;
    inst.system = system_from(at(j, "system", ""), "system");
    inst.system.validate();
    inst.trial_seed = get_u64(at(j, "trial_seed", ""), "trial_seed");
    inst.axis_index = get_int(at(j, "axis_index", ""), "axis_index");

    const json &paths = at(j, "paths", "");
    require_object(paths, "paths");
    for (const auto &p : at(paths, "bs_irs", "paths"))
        inst.paths.bs_irs.push_back(
            {get_complex(at(p, "alpha", "paths.bs_irs"), "paths.bs_irs.alpha"),
             get_double(at(p, "phi", "paths.bs_irs"), "paths.bs_irs.phi"),
             get_double(at(p, "theta_a", "paths.bs_irs"), "paths.bs_irs.theta_a"),
             get_double(at(p, "theta_e", "paths.bs_irs"), "paths.bs_irs.theta_e"),
             get_double(at(p, "tau", "paths.bs_irs"), "paths.bs_irs.tau")});
    for (const auto &p : at(paths, "irs_user", "paths"))
        inst.paths.irs_user.push_back(
            {get_complex(at(p, "rho", "paths.irs_user"), "paths.irs_user.rho"),
             get_double(at(p, "chi_a", "paths.irs_user"), "paths.irs_user.chi_a"),
             get_double(at(p, "chi_e", "paths.irs_user"), "paths.irs_user.chi_e"),
             get_double(at(p, "kappa", "paths.irs_user"), "paths.irs_user.kappa"),
             get_double(at(p, "d2", "paths.irs_user"), "paths.irs_user.d2")});
    for (const auto &c : at(j, "truth", ""))
        inst.truth.push_back(composite_from(c, "truth"));
    if (static_cast<int>(inst.truth.size()) != inst.system.u())
        bad("truth", fmt::format("{} paths, expected U = {}", inst.truth.size(), inst.system.u()));

    const json &training = at(j, "training", "");
    inst.training.v = get_matrix(at(training, "v", "training"), "training.v");
    inst.training.f = get_matrix(at(training, "f", "training"), "training.f");
    if (inst.training.v.rows() != inst.system.m() || inst.training.v.cols() != inst.system.q ||
        inst.training.f.rows() != inst.system.n_bs || inst.training.f.cols() != inst.system.t)
        bad("training", "matrix sizes do not match the system configuration");

    inst.rx.y = get_tensor(at(j, "y", ""), "y");
    inst.rx.noise = get_tensor(at(j, "noise", ""), "noise");
    inst.rx.snr_db = get_double_or_inf(at(j, "snr_db", ""), "snr_db");
    for (const auto *t : {&inst.rx.y, &inst.rx.noise})
        if (t->dim(0) != inst.system.q || t->dim(1) != inst.system.t || t->dim(2) != inst.system.p)
            bad("y", "tensor dimensions do not match Q x T x P");

    inst.h = cascade_channels(inst.truth, inst.system);
    return inst;
}

void save_instance(const std::filesystem::path &path, const eval::Instance &inst)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error(fmt::format("cannot write instance file '{}'", path.string()));
    write_instance(out, inst);
    if (!out)
        throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

eval::Instance load_instance(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open instance file '{}'", path.string()));
    return read_instance(in);
}

std::string outcome_to_json(const eval::MethodOutcome &o)
{
    json paths = json::array();
    for (const auto &c : o.paths)
        paths.push_back(composite_json(c));
    const auto &d = o.diagnostics;
    const json j{
        {"method", o.method},
        {"nmse", number(o.nmse)},
        {"fail_flag", o.fail_flag},
        {"failure", o.failure},
        {"detected_rank", o.detected_rank},
        {"mse", json{{"omega_a", number(o.mse.omega_a)},
                     {"omega_e", number(o.mse.omega_e)},
                     {"phi", number(o.mse.phi)},
                     {"iota", number(o.mse.iota)},
                     {"beta", number(o.mse.beta)}}},
        {"paths", std::move(paths)},
        {"diagnostics", json{{"rank", d.rank},
                             {"u1_condition", number(d.u1_condition)},
                             {"a_tilde_condition", number(d.a_tilde_condition)},
                             {"b_tilde_condition", number(d.b_tilde_condition)},
                             {"psi1_offdiag_ratio", number(d.psi1_offdiag_ratio)},
                             {"a_tilde_degenerate", d.a_tilde_degenerate},
                             {"b_tilde_degenerate", d.b_tilde_degenerate},
                             {"cpd_residual", number(d.cpd_residual)},
                             {"irs_scores", d.irs_scores},
                             {"bs_scores", d.bs_scores}}},
        {"wall_ms", number(o.wall_ms)}};
    return j.dump(2);
}

std::string identifiability_to_json(const scpd::IdentifiabilityReport &report,
                                    const SystemConfig &cfg)
{
    const json j{{"system", system_json(cfg)},
                 {"u", cfg.u()},
                 {"kruskal_holds", report.kruskal_holds},
                 {"vandermonde_condition_holds", report.vandermonde_condition_holds},
                 {"dimension_check", report.dimension_check},
                 {"reasons", report.reasons}};
    return j.dump(2);
}

} // namespace irscpd::io
