#include "anderson/harness.hpp"

#include "anderson/evc.hpp"
#include "anderson/parallel.hpp"
#include "anderson/random.hpp"

#include <boost/uuid/detail/sha1.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace anderson {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> kinds = {"wegner1", "wegner2",  "shift-test", "ss-prob",   "bad-good",
                                                   "dominated", "wi-tensor", "etv",       "efc-decay", "gri-measure"};
    return kinds;
}

// ---------------------------------------------------------------------------
// Config (de)serialization

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.contains(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read_field(const json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

ModelSpec parse_model(const json& j)
{
    if (!j.is_object())
        throw ConfigError("'model' must be an object");
    reject_unknown(j,
                   {"particles", "dim", "interaction_amplitude", "interaction_exponent", "disorder_coupling",
                    "amplitude_support", "energy_window", "mesh_refinement"},
                   "model");
    ModelSpec m;
    read_field(j, "particles", m.particles);
    read_field(j, "dim", m.dim);
    read_field(j, "interaction_amplitude", m.interaction_amplitude);
    read_field(j, "interaction_exponent", m.interaction_exponent);
    read_field(j, "disorder_coupling", m.disorder_coupling);
    read_field(j, "amplitude_support", m.amplitude_support);
    read_field(j, "energy_window", m.energy_window);
    read_field(j, "mesh_refinement", m.mesh_refinement);
    try {
        m.validate();
    } catch (const ModelError& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
    return m;
}

json model_json(const ModelSpec& m)
{
    return {{"particles", m.particles},
            {"dim", m.dim},
            {"interaction_amplitude", m.interaction_amplitude},
            {"interaction_exponent", m.interaction_exponent},
            {"disorder_coupling", m.disorder_coupling},
            {"amplitude_support", m.amplitude_support},
            {"energy_window", m.energy_window},
            {"mesh_refinement", m.mesh_refinement}};
}

ScaleParams parse_params(const json& j)
{
    if (!j.is_object())
        throw ConfigError("'params' must be an object");
    reject_unknown(j,
                   {"max_particles", "initial_scale", "growth", "kappa", "beta", "delta", "zeta", "mass", "nu",
                    "energy_window"},
                   "params");
    ScaleParams p;
    read_field(j, "max_particles", p.max_particles);
    read_field(j, "initial_scale", p.initial_scale);
    read_field(j, "growth", p.growth);
    read_field(j, "kappa", p.kappa);
    read_field(j, "beta", p.beta);
    read_field(j, "delta", p.delta);
    read_field(j, "zeta", p.zeta);
    read_field(j, "mass", p.mass);
    read_field(j, "nu", p.nu);
    read_field(j, "energy_window", p.energy_window);
    return p;
}

json params_json(const ScaleParams& p)
{
    return {{"max_particles", p.max_particles},
            {"initial_scale", p.initial_scale},
            {"growth", p.growth},
            {"kappa", p.kappa},
            {"beta", p.beta},
            {"delta", p.delta},
            {"zeta", p.zeta},
            {"mass", p.mass},
            {"nu", p.nu},
            {"energy_window", p.energy_window}};
}

const std::map<std::string, std::vector<std::string>>& required_geometry()
{
    static const std::map<std::string, std::vector<std::string>> req = {
        {"wegner1", {"center", "radius", "energy", "s_grid"}},
        {"wegner2", {"centers", "radius", "s_grid"}},
        {"shift-test", {"centers", "radius", "shift"}},
        {"ss-prob", {"particles", "energy"}},
        {"bad-good", {"center", "energy"}},
        {"dominated", {}},
        {"wi-tensor", {"center", "radius"}},
        {"etv", {"center", "radius"}},
        {"efc-decay", {"r_list"}},
        {"gri-measure", {"center", "radius", "outer_radius", "energy"}},
    };
    return req;
}

} // namespace

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"kind", "seed", "trials", "workers", "output", "model", "params", "strict_params", "geometry",
                    "options"},
                   "config");
    ExperimentConfig c;
    if (!j.contains("kind"))
        throw ConfigError("config is missing 'kind'");
    read_field(j, "kind", c.kind);
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
        throw ConfigError("unknown experiment kind '" + c.kind + "'");
    if (!j.contains("seed"))
        throw ConfigError("config is missing the mandatory 'seed'");
    auto non_negative = [](const json& v) {
        return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    };
    if (!non_negative(j.at("seed")))
        throw ConfigError("'seed' must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("trials"))
        throw ConfigError("config is missing 'trials'");
    if (!non_negative(j.at("trials")))
        throw ConfigError("'trials' must be a positive integer");
    read_field(j, "trials", c.trials);
    if (c.trials < 1)
        throw ConfigError("'trials' must be >= 1");
    read_field(j, "workers", c.workers);
    if (c.workers < 1)
        throw ConfigError("'workers' must be >= 1");
    read_field(j, "output", c.output);
    read_field(j, "strict_params", c.strict_params);
    if (j.contains("model"))
        c.model = parse_model(j.at("model"));
    if (j.contains("params"))
        c.params = parse_params(j.at("params"));
    if (j.contains("geometry")) {
        if (!j.at("geometry").is_object())
            throw ConfigError("'geometry' must be an object");
        c.geometry = j.at("geometry");
    }
    if (j.contains("options")) {
        if (!j.at("options").is_object())
            throw ConfigError("'options' must be an object");
        c.options = j.at("options");
    }
    for (const auto& key : required_geometry().at(c.kind))
        if (!c.geometry.contains(key))
            throw ConfigError("experiment '" + c.kind + "' needs geometry." + key);
    return c;
}

json to_json(const ExperimentConfig& c)
{
    return {{"kind", c.kind},
            {"seed", c.seed},
            {"trials", c.trials},
            {"workers", c.workers},
            {"output", c.output},
            {"strict_params", c.strict_params},
            {"model", model_json(c.model)},
            {"params", params_json(c.params)},
            {"geometry", c.geometry},
            {"options", c.options}};
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Formatting, hashing, files

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sha1_hex(const std::string& bytes)
{
    boost::uuids::detail::sha1 h;
    h.process_bytes(bytes.data(), bytes.size());
    boost::uuids::detail::sha1::digest_type digest;
    h.get_digest(digest);
    std::ostringstream os;
    for (unsigned word : digest)
        os << std::hex << std::setw(8) << std::setfill('0') << word;
    return os.str();
}

std::string git_blob_id(const std::string& bytes)
{
    std::string framed = "blob " + std::to_string(bytes.size());
    framed.push_back('\0');
    framed += bytes;
    return sha1_hex(framed);
}

std::string ResultRecord::data_block() const
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += '\n';
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = dir / (path.filename().string() + ".tmp-" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move result into place at " + path.string() + ": " + ec.message());
    }
}

namespace {

std::string summary_value(const json& v)
{
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

} // namespace

void write_result(const std::filesystem::path& path, const ResultRecord& r)
{
    std::ostringstream os;
    os << "# kind: " << r.kind << '\n';
    os << "# config_hash: " << r.config_hash << '\n';
    os << "# content_id: " << r.content_id << '\n';
    for (auto it = r.summary.begin(); it != r.summary.end(); ++it)
        os << "# summary." << it.key() << ": " << summary_value(it.value()) << '\n';
    for (const auto& n : r.notes)
        os << "# note: " << n << '\n';
    os << "# wall_seconds: " << format_double(r.wall_seconds) << '\n';
    os << r.data_block();
    write_atomic(path, os.str());

    json side = r.summary;
    side["kind"] = r.kind;
    side["config_hash"] = r.config_hash;
    side["content_id"] = r.content_id;
    side["wall_seconds"] = r.wall_seconds;
    side["rows"] = r.rows.size();
    write_atomic(path.string() + ".summary.json", side.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Experiment runners

namespace {

Configuration parse_configuration(const json& j, int dim)
{
    if (!j.is_array() || j.empty())
        throw ConfigError("a configuration must be a nonempty array");
    std::vector<int> coords;
    if (j.front().is_array()) {
        for (const auto& p : j) {
            if (!p.is_array() || static_cast<int>(p.size()) != dim)
                throw ConfigError("every particle needs exactly d coordinates");
            for (const auto& v : p)
                coords.push_back(v.get<int>());
        }
    } else {
        for (const auto& v : j)
            coords.push_back(v.get<int>());
        if (coords.size() % static_cast<std::size_t>(dim) != 0)
            throw ConfigError("flat configuration length is not a multiple of d");
    }
    return Configuration(dim, std::move(coords));
}

Configuration center_of(const ExperimentConfig& c, const char* key = "center")
{
    auto x = parse_configuration(c.geometry.at(key), c.model.dim);
    if (x.particles() != c.model.particles)
        throw ConfigError(std::string("geometry.") + key + " has the wrong number of particles");
    return x;
}

std::vector<double> parse_grid(const json& j)
{
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j)
            out.push_back(v.get<double>());
        return out;
    }
    if (j.is_object() && j.contains("log_min") && j.contains("log_max") && j.contains("points")) {
        const double lo = j.at("log_min").get<double>();
        const double hi = j.at("log_max").get<double>();
        const int n = j.at("points").get<int>();
        if (n < 2)
            throw ConfigError("s_grid needs at least two points");
        for (int k = 0; k < n; ++k)
            out.push_back(std::pow(10.0, lo + (hi - lo) * k / (n - 1)));
        return out;
    }
    throw ConfigError("s_grid must be an array or {log_min, log_max, points}");
}

template <class T>
T option(const ExperimentConfig& c, const char* key, T fallback)
{
    if (!c.options.contains(key))
        return fallback;
    try {
        return c.options.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad option '") + key + "': " + e.what());
    }
}

template <class T>
T geo(const ExperimentConfig& c, const char* key)
{
    try {
        return c.geometry.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad geometry value '") + key + "': " + e.what());
    }
}

template <class T>
T geo(const ExperimentConfig& c, const char* key, T fallback)
{
    return c.geometry.contains(key) ? geo<T>(c, key) : fallback;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

void param_notes(const ExperimentConfig& c, ResultRecord& r)
{
    auto rep = check_params(c.params, c.strict_params ? ParamMode::Strict : ParamMode::Exploratory);
    for (const auto& f : rep.failures())
        r.notes.push_back("exploratory parameters, constraint violated: " + f);
}

void evc_table(const EvcResult& e, ResultRecord& r)
{
    r.header = {"s", "count", "prob", "stderr"};
    for (std::size_t i = 0; i < e.s_grid.size(); ++i)
        r.rows.push_back({fmt(e.s_grid[i]), fmt(e.counts[i]), fmt(e.prob[i]), fmt(e.stderr_[i])});
    if (e.slope) {
        r.summary["theta"] = e.slope->slope;
        r.summary["theta_half_width"] = e.slope->half_width;
    }
    r.summary["max_ratio_two_thirds"] = e.max_ratio;
}

EvcOptions evc_options(const ExperimentConfig& c, ResultRecord& r)
{
    EvcOptions o;
    o.workers = c.workers;
    o.interaction = option(c, "interaction", true);
    o.shared_disorder = option(c, "shared_disorder", true);
    o.min_trials = option<std::size_t>(c, "min_trials", 500);
    if (c.trials < 500) {
        o.min_trials = std::min(o.min_trials, c.trials);
        r.notes.push_back("fewer than 500 trials; smoke-scale statistics only");
    }
    return o;
}

void run_wegner1(const ExperimentConfig& c, ResultRecord& r)
{
    const Cube cube(center_of(c), geo<int>(c, "radius"));
    auto e = wegner_one_volume(cube, geo<double>(c, "energy"), c.model, parse_grid(c.geometry.at("s_grid")),
                               c.trials, c.seed, evc_options(c, r));
    evc_table(e, r);
}

std::pair<Cube, Cube> cube_pair(const ExperimentConfig& c)
{
    const auto& centers = c.geometry.at("centers");
    if (!centers.is_array() || centers.size() != 2)
        throw ConfigError("geometry.centers must hold two configurations");
    const int radius = geo<int>(c, "radius");
    Cube a(parse_configuration(centers[0], c.model.dim), radius);
    Cube b(parse_configuration(centers[1], c.model.dim), radius);
    if (a.particles() != c.model.particles || b.particles() != c.model.particles)
        throw ConfigError("geometry.centers have the wrong number of particles");
    return {a, b};
}

void run_wegner2(const ExperimentConfig& c, ResultRecord& r)
{
    auto [cx, cy] = cube_pair(c);
    auto e = wegner_two_volume(cx, cy, c.model, parse_grid(c.geometry.at("s_grid")), c.trials, c.seed,
                               evc_options(c, r));
    evc_table(e, r);
    // C is the max of p(s)/s^{2/3} over the fit range; by default that is the check range.
    const double fit_lo = option(c, "fit_s_min", 1e-4), fit_hi = option(c, "fit_s_max", 1e-1);
    const double chk_lo = option(c, "check_s_min", 1e-4), chk_hi = option(c, "check_s_max", 1e-1);
    const double k = two_thirds_constant(e, fit_lo, fit_hi);
    r.summary["fit_s_min"] = fit_lo;
    r.summary["fit_s_max"] = fit_hi;
    r.summary["check_s_min"] = chk_lo;
    r.summary["check_s_max"] = chk_hi;
    r.summary["fitted_constant"] = k;
    r.summary["violations"] = two_thirds_violations(e, k, chk_lo, chk_hi);
    if (auto cert = weakly_separated(cx, cy))
        r.summary["separation_box_diameter"] = cert->q.diameter();
}

void run_shift_test(const ExperimentConfig& c, ResultRecord& r)
{
    auto [cx, cy] = cube_pair(c);
    auto cert = weakly_separated(cx, cy);
    if (!cert)
        throw PreconditionError("the cube pair is not weakly separated");
    const double shift = geo<double>(c, "shift");
    const auto region = shift_region(cx, cy, *cert);
    std::vector<ShiftResult> res(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(c.seed, tag_of("shift-test"), t), c.model);
        res[t] = eigenvalue_shift_test(cx, cy, *cert, sample, c.model, shift);
    });
    r.header = {"trial", "n1", "n2", "residual_x", "residual_y"};
    double worst = 0.0;
    for (std::size_t t = 0; t < res.size(); ++t) {
        r.rows.push_back({fmt(t), fmt(res[t].n1), fmt(res[t].n2), fmt(res[t].residual_x), fmt(res[t].residual_y)});
        worst = std::max(worst, res[t].max_residual());
    }
    r.summary["max_residual"] = worst;
    r.summary["separation_box_diameter"] = cert->q.diameter();
}

void run_ss_prob(const ExperimentConfig& c, ResultRecord& r)
{
    param_notes(c, r);
    const int n = geo<int>(c, "particles");
    const int k = geo<int>(c, "scale_index", 0);
    if (c.strict_params && k != 0)
        throw ConfigError("strict parameters allow only the initial scale (scale_index 0)");
    const double c_gri = option(c, "c_gri", 2.0);
    auto est = estimate_singularity_prob(n, k, geo<double>(c, "energy"), c.params, c.model, c.trials, c.seed, c_gri,
                                         c.workers);
    r.header = {"n", "k", "L", "singular", "trials", "p_hat", "ci_lo", "ci_hi", "bound"};
    r.rows.push_back({fmt(n), fmt(k), fmt(est.radius), fmt(est.singular), fmt(est.trials), fmt(est.p_hat),
                      fmt(est.ci_lo), fmt(est.ci_hi), fmt(est.bound)});
    r.summary["p_hat"] = est.p_hat;
    r.summary["bound"] = est.bound;
}

void run_bad_good(const ExperimentConfig& c, ResultRecord& r)
{
    param_notes(c, r);
    const int k = geo<int>(c, "scale_index", 0);
    const long long lk = c.params.scale(k), lk1 = c.params.scale(k + 1);
    if (lk1 > 40)
        throw ConfigError("L_{k+1} too large for a dense eigensolve; lower Y or L0");
    const Cube big(center_of(c), static_cast<int>(lk1));
    const double energy = geo<double>(c, "energy");
    const NsParams ns = ns_params(c.params, c.model.particles, option(c, "c_gri", 2.0));
    const auto region = big.projection_sites();
    std::vector<ImplicationRecord> recs(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(c.seed, tag_of("bad-good"), t), c.model);
        recs[t] = implication_check(big, energy, static_cast<int>(lk), ns, c.params.beta, sample, c.model);
    });
    r.header = {"trial", "good", "non_resonant", "non_singular", "dnorm", "threshold", "violation"};
    std::size_t premises = 0, violations = 0, good = 0;
    for (std::size_t t = 0; t < recs.size(); ++t) {
        const auto& x = recs[t];
        r.rows.push_back({fmt(t), fmt(x.good), fmt(x.non_resonant), fmt(x.non_singular), fmt(x.dnorm),
                          fmt(x.threshold), fmt(x.violation())});
        premises += x.premises();
        violations += x.violation();
        good += x.good;
    }
    r.summary["good"] = good;
    r.summary["premises"] = premises;
    r.summary["violations"] = violations;
    r.summary["c_gri"] = ns.c_gri;
    r.summary["mass"] = ns.mass;
}

void run_dominated(const ExperimentConfig& c, ResultRecord& r)
{
    struct Row {
        bool predicate = false, holds = false;
        double center = 0.0, bound = 0.0;
        int width = 0, layers = 0, r0 = 0;
    };
    std::vector<Row> rows(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
        auto gf = random_graph_function(trial_key(c.seed, tag_of("dominated"), t));
        DominationContext ctx(gf);
        auto cover = tight_cover(ctx);
        Row row;
        row.width = cover_width(cover);
        row.predicate = ctx.dominated();
        if (row.width <= gf.radius - gf.scale) {
            auto b = dominated_bound(gf, cover);
            row.holds = b.holds();
            row.center = b.center_value;
            row.bound = b.bound;
            row.layers = static_cast<int>(b.layers.size());
            row.r0 = b.layers.empty() ? -1 : b.layers.back();
        } else {
            row.predicate = false;
        }
        rows[t] = row;
    });
    r.header = {"trial", "predicate", "holds", "center_value", "bound", "width", "layers", "r0"};
    std::size_t checked = 0, failures = 0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& x = rows[t];
        r.rows.push_back({fmt(t), fmt(x.predicate), fmt(x.holds), fmt(x.center), fmt(x.bound), fmt(x.width),
                          fmt(x.layers), fmt(x.r0)});
        if (x.predicate) {
            ++checked;
            failures += !x.holds;
        }
    }
    r.summary["dominated_instances"] = checked;
    r.summary["failures"] = failures;
}

void run_wi_tensor(const ExperimentConfig& c, ResultRecord& r)
{
    const Cube cube(center_of(c), geo<int>(c, "radius"));
    const auto region = cube.projection_sites();
    std::vector<WiTensorReport> reps(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(c.seed, tag_of("wi-tensor"), t), c.model);
        reps[t] = wi_tensor_check(cube, sample, c.model);
    });
    r.header = {"trial", "gap", "cross_norm", "gap_bound", "scale_bound", "sum_residual", "weyl_slack"};
    double worst_excess = -1.0, worst_residual = 0.0, worst_slack = -1.0;
    for (std::size_t t = 0; t < reps.size(); ++t) {
        const auto& x = reps[t];
        r.rows.push_back({fmt(t), fmt(x.gap), fmt(x.cross_norm), fmt(x.gap_bound), fmt(x.scale_bound),
                          fmt(x.sum_residual), fmt(x.weyl_slack)});
        worst_excess = std::max(worst_excess, x.cross_norm - x.gap_bound);
        worst_residual = std::max(worst_residual, x.sum_residual);
        worst_slack = std::max(worst_slack, x.weyl_slack);
    }
    r.summary["max_norm_excess"] = worst_excess;
    r.summary["max_sum_residual"] = worst_residual;
    r.summary["max_weyl_slack"] = worst_slack;
}

void run_etv(const ExperimentConfig& c, ResultRecord& r)
{
    param_notes(c, r);
    const Cube cube(center_of(c), geo<int>(c, "radius"));
    const double nu = option(c, "nu", c.params.nu_n(c.model.particles));
    const double kappa = option(c, "kappa", c.params.kappa);
    auto e = etv_experiment(cube, c.model, nu, kappa, c.trials, c.seed, c.workers);
    r.header = {"trial", "covered", "grid_points", "exceed_points", "uncovered_points"};
    for (std::size_t t = 0; t < e.verdicts.size(); ++t) {
        const auto& v = e.verdicts[t];
        r.rows.push_back({fmt(t), fmt(v.covered), fmt(v.grid_points), fmt(v.exceed_points), fmt(v.uncovered_points)});
    }
    r.summary["nu"] = nu;
    r.summary["kappa"] = kappa;
    r.summary["a"] = e.scales.a;
    r.summary["b"] = e.scales.b;
    r.summary["c"] = e.scales.c;
    r.summary["q"] = e.scales.q;
    r.summary["violations"] = e.violations;
    r.summary["frequency"] = e.frequency;
    r.summary["stderr"] = e.stderr_;
    r.summary["budget"] = e.budget;
}

void run_efc_decay(const ExperimentConfig& c, ResultRecord& r)
{
    EfcOptions o;
    const auto pattern = geo<std::string>(c, "pattern", "pair");
    if (pattern == "pair")
        o.pattern = EfcPattern::Pair;
    else if (pattern == "triple")
        o.pattern = EfcPattern::Triple;
    else
        throw ConfigError("geometry.pattern must be 'pair' or 'triple'");
    o.workers = c.workers;
    o.time_samples = option(c, "time_samples", o.time_samples);
    o.time_max = option(c, "time_max", o.time_max);
    o.gk_energy_points = option(c, "gk_energy_points", o.gk_energy_points);
    o.gk_quantile = option(c, "gk_quantile", o.gk_quantile);
    auto res = efc_decay_experiment(c.model, geo<std::vector<int>>(c, "r_list"), c.trials, c.seed, o);
    r.header = {"R", "d_sym", "d_haus", "mean", "stderr", "dominance_failures", "gk_u", "gk_h", "gk_rhs"};
    for (const auto& row : res.rows)
        r.rows.push_back({fmt(row.r), fmt(row.d_sym), fmt(row.d_haus), fmt(row.mean), fmt(row.stderr_),
                          fmt(row.dominance_failures), fmt(row.gk_u), fmt(row.gk_h), fmt(4 * row.gk_u + row.gk_h)});
    r.summary["strictly_decreasing"] = res.strictly_decreasing;
    if (res.log_fit) {
        r.summary["slope"] = res.log_fit->slope;
        r.summary["p_value"] = res.log_fit->p_value;
    }
    if (res.stretched) {
        r.summary["nu_hat"] = res.stretched->nu;
        r.summary["kappa_hat"] = res.stretched->kappa;
    }
}

void run_gri_measure(const ExperimentConfig& c, ResultRecord& r)
{
    const auto center = center_of(c);
    const Cube small(center, geo<int>(c, "radius"));
    const Cube big(center, geo<int>(c, "outer_radius"));
    const double energy = geo<double>(c, "energy");
    const auto region = big.projection_sites();
    std::vector<double> ratio(c.trials);
    parallel_for(c.trials, c.workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(c.seed, tag_of("gri-measure"), t), c.model);
        ratio[t] = measure_gri(small, big, sample, c.model, energy).ratio;
    });
    r.header = {"trial", "ratio"};
    double worst = 0.0;
    for (std::size_t t = 0; t < ratio.size(); ++t) {
        r.rows.push_back({fmt(t), fmt(ratio[t])});
        worst = std::max(worst, ratio[t]);
    }
    r.summary["max_ratio"] = worst;
    r.summary["lattice_bound"] = gri_lattice_bound(c.model.particles, c.model.dim);
}

} // namespace

ResultRecord run(const ExperimentConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    ResultRecord r;
    r.kind = config.kind;
    json canonical = to_json(config);
    canonical.erase("output");
    canonical.erase("workers");
    r.config_hash = sha1_hex(canonical.dump());

    static const std::map<std::string, void (*)(const ExperimentConfig&, ResultRecord&)> runners = {
        {"wegner1", run_wegner1},     {"wegner2", run_wegner2},     {"shift-test", run_shift_test},
        {"ss-prob", run_ss_prob},     {"bad-good", run_bad_good},   {"dominated", run_dominated},
        {"wi-tensor", run_wi_tensor}, {"etv", run_etv},             {"efc-decay", run_efc_decay},
        {"gri-measure", run_gri_measure}};
    auto it = runners.find(config.kind);
    if (it == runners.end())
        throw ConfigError("unknown experiment kind '" + config.kind + "'");
    it->second(config, r);

    r.content_id = git_blob_id(r.data_block());
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!config.output.empty())
        write_result(config.output, r);
    return r;
}

// ---------------------------------------------------------------------------
// Reading and reporting

std::string ParsedResult::meta(const std::string& key, const std::string& fallback) const
{
    for (const auto& [k, v] : metadata)
        if (k == key)
            return v;
    return fallback;
}

std::vector<double> ParsedResult::column(const std::string& name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::invalid_argument("result " + path.string() + " has no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& row : rows)
        out.push_back(std::stod(row.at(idx)));
    return out;
}

ParsedResult read_result(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open result file " + path.string());
    ParsedResult p;
    p.path = path;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        return out;
    };
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos)
                continue;
            auto key = line.substr(1, colon - 1);
            auto value = line.substr(colon + 1);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(' ');
                const auto b = s.find_last_not_of(' ');
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            p.metadata.emplace_back(trim(key), trim(value));
        } else if (p.header.empty()) {
            p.header = split(line);
        } else {
            p.rows.push_back(split(line));
        }
    }
    if (p.header.empty())
        throw std::runtime_error("result file " + path.string() + " has no header row");
    return p;
}

namespace {

double meta_number(const ParsedResult& p, const std::string& key)
{
    const auto v = p.meta(key);
    if (v.empty())
        throw std::runtime_error("result " + p.path.string() + " lacks metadata '" + key + "'");
    return std::stod(v);
}

void write_plot(const std::filesystem::path& out_dir, const ParsedResult& p, const std::string& x,
                const std::string& y, const std::vector<double>* extra = nullptr, const std::string& extra_name = "")
{
    if (out_dir.empty())
        return;
    const auto xs = p.column(x);
    const auto ys = p.column(y);
    std::string body = x + "," + y + (extra ? "," + extra_name : "") + "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        body += format_double(xs[i]) + "," + format_double(ys[i]);
        if (extra)
            body += "," + format_double((*extra)[i]);
        body += "\n";
    }
    write_atomic(out_dir / ("plot_" + p.path.stem().string() + ".csv"), body);
}

} // namespace

std::vector<ReportLine> report(const std::vector<std::filesystem::path>& files, const std::filesystem::path& out_dir)
{
    if (files.empty())
        throw std::invalid_argument("report needs at least one result file");
    std::vector<ReportLine> lines;
    for (const auto& path : files) {
        const auto p = read_result(path);
        const auto kind = p.meta("kind");
        auto add = [&](std::string metric, double value, std::string criterion, bool pass) {
            lines.push_back({path.filename().string(), kind, std::move(metric), value, std::move(criterion), pass});
        };
        if (kind == "wegner1") {
            auto fit = loglog_slope(p.column("s"), p.column("prob"));
            add("theta", fit.slope, "theta >= 0.9", fit.slope >= 0.9);
            write_plot(out_dir, p, "s", "prob");
        } else if (kind == "wegner2") {
            EvcResult e;
            e.s_grid = p.column("s");
            e.prob = p.column("prob");
            auto range = [&](const std::string& key, double fallback) {
                const auto v = p.meta("summary." + key);
                return v.empty() ? fallback : std::stod(v);
            };
            const double k = two_thirds_constant(e, range("fit_s_min", 1e-4), range("fit_s_max", 1e-1));
            add("fitted_constant", k, "reference", true);
            const double lo = range("check_s_min", 1e-4), hi = range("check_s_max", 1e-1);
            const auto v = two_thirds_violations(e, k, lo, hi);
            add("violations", static_cast<double>(v),
                "p(s) <= C s^(2/3) on [" + format_double(lo) + ", " + format_double(hi) + "]", v == 0);
            try {
                add("theta", loglog_slope(e.s_grid, e.prob).slope, "reported", true);
            } catch (const std::invalid_argument&) {
            }
            write_plot(out_dir, p, "s", "prob");
        } else if (kind == "shift-test") {
            const auto rx = p.column("residual_x"), ry = p.column("residual_y");
            double worst = 0.0;
            for (std::size_t i = 0; i < rx.size(); ++i)
                worst = std::max({worst, rx[i], ry[i]});
            add("max_residual", worst, "< 1e-9", worst < 1e-9);
        } else if (kind == "ss-prob") {
            const double ph = p.column("p_hat").at(0), lo = p.column("ci_lo").at(0), b = p.column("bound").at(0);
            add("p_hat", ph, "Wilson lower limit <= bound (reported)", lo <= b);
        } else if (kind == "bad-good") {
            double v = 0.0;
            for (double x : p.column("violation"))
                v += x;
            add("violations", v, "== 0 where good and NR", v == 0.0);
            write_plot(out_dir, p, "trial", "dnorm");
        } else if (kind == "dominated") {
            const auto pred = p.column("predicate"), holds = p.column("holds");
            double failures = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i)
                failures += pred[i] > 0.5 && holds[i] < 0.5;
            add("failures", failures, "== 0 on dominated instances", failures == 0.0);
        } else if (kind == "wi-tensor") {
            const auto cn = p.column("cross_norm"), gb = p.column("gap_bound"), sr = p.column("sum_residual");
            double excess = -1.0, res = 0.0;
            for (std::size_t i = 0; i < cn.size(); ++i) {
                excess = std::max(excess, cn[i] - gb[i]);
                res = std::max(res, sr[i]);
            }
            add("norm_excess", excess, "<= 0", excess <= 0.0);
            add("sum_residual", res, "<= 1e-9", res <= 1e-9);
        } else if (kind == "etv") {
            const double f = meta_number(p, "summary.frequency"), b = meta_number(p, "summary.budget"),
                         se = meta_number(p, "summary.stderr");
            add("violation_frequency", f, "<= budget + 3 stderr", f <= b + 3 * se);
        } else if (kind == "efc-decay") {
            const auto r = p.column("R"), m = p.column("mean"), ds = p.column("d_sym");
            std::vector<double> logs;
            for (double v : m)
                logs.push_back(std::log(v));
            auto fit = linear_fit(r, logs);
            bool decreasing = true;
            for (std::size_t i = 1; i < m.size(); ++i)
                decreasing = decreasing && m[i] < m[i - 1];
            add("slope", fit.slope, "< 0", fit.slope < 0.0);
            add("p_value", fit.p_value, "< 0.01", fit.p_value < 0.01);
            add("strictly_decreasing", decreasing ? 1.0 : 0.0, "== 1", decreasing);
            try {
                auto st = fit_stretched_exponential(ds, m);
                add("nu_hat", st.nu, "reported", true);
                add("kappa_hat", st.kappa, "reported", true);
                add("stretched_rss", st.rss, "reported", true);
                if (st.residuals.size() == m.size())
                    write_plot(out_dir, p, "R", "mean", &st.residuals, "log_residual");
                else
                    write_plot(out_dir, p, "R", "mean");
            } catch (const std::invalid_argument&) {
                // Too few positive means for a fit; the slope lines above already fail.
                write_plot(out_dir, p, "R", "mean");
            }
        } else if (kind == "gri-measure") {
            double worst = 0.0;
            for (double v : p.column("ratio"))
                worst = std::max(worst, v);
            const double bound = meta_number(p, "summary.lattice_bound");
            add("max_ratio", worst, "<= lattice bound", worst <= bound);
        } else {
            throw std::runtime_error("result " + path.string() + " has unknown kind '" + kind + "'");
        }
    }

    if (!out_dir.empty()) {
        std::string body = "file,kind,metric,value,criterion,pass\n";
        for (const auto& l : lines)
            body += l.file + "," + l.kind + "," + l.metric + "," + format_double(l.value) + ",\"" + l.criterion +
                    "\"," + (l.pass ? "1" : "0") + "\n";
        write_atomic(out_dir / "summary.csv", body);
    }
    return lines;
}

} // namespace anderson
