// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "anderson/dominated.hpp"
#include "anderson/evc.hpp"
#include "anderson/harness.hpp"
#include "anderson/msa.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

using namespace anderson;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail)
{
    failures += !pass;
    std::cout << "C" << id << " " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

void info(int id, const std::string& detail) { std::cout << "   C" << id << " info: " << detail << std::endl; }

fs::path work_dir()
{
    if (const char* env = std::getenv("ANDERSON_ACCEPT_DIR"))
        return env;
    return fs::temp_directory_path() / ("anderson-accept-" + std::to_string(::getpid()));
}

int workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string num(double v) { return format_double(v); }

ResultRecord run_json(json j, const std::string& name)
{
    j["output"] = (work_dir() / name).string();
    if (!j.contains("workers"))
        j["workers"] = workers();
    return run(parse_config(j));
}

const ReportLine* line_for(const std::vector<ReportLine>& lines, const std::string& metric)
{
    for (const auto& l : lines)
        if (l.metric == metric)
            return &l;
    return nullptr;
}

void c1()
{
    const Configuration a(1, {0, 0, 10}), b(1, {0, 10, 10});
    // Median of repeated calls: a single sample on a loaded single-core host can catch a preemption.
    int ds = -1, dh = -1;
    std::vector<double> dt;
    for (int rep = 0; rep < 101; ++rep) {
        const auto t0 = Clock::now();
        ds = sym_distance(a, b);
        dh = hausdorff_distance(a, b);
        dt.push_back(seconds_since(t0));
    }
    const double worst = *std::max_element(dt.begin(), dt.end());
    std::nth_element(dt.begin(), dt.begin() + 50, dt.end());
    const double median = dt[50];
    verdict(1, ds == 10 && dh == 0 && median < 1e-3,
            "d_S = " + std::to_string(ds) + ", d_H = " + std::to_string(dh) + ", median " + num(median * 1e3) +
                " ms over 101 calls (max " + num(worst * 1e3) + " ms)");
}

void c2()
{
    const auto t0 = Clock::now();
    CounterRng rng(0xacc2);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        ModelSpec spec;
        spec.particles = oracle::uniform_int(rng, 1, 2);
        spec.disorder_coupling = rng.uniform(0.5, 3.0);
        const int l = oracle::uniform_int(rng, 1, 6);
        Cube cx(oracle::random_configuration(rng, spec.particles, 1, 40), l);
        Cube cy(oracle::random_configuration(rng, spec.particles, 1, 40), l);
        auto cert = weakly_separated(cx, cy);
        if (!cert)
            continue;
        ++done;
        auto sample = sample_disorder(shift_region(cx, cy, *cert), rng(), spec);
        const double c = rng.uniform(-0.5, 0.5);
        worst = std::max(worst, eigenvalue_shift_test(cx, cy, *cert, sample, spec, c).max_residual());
    }
    const double dt = seconds_since(t0);
    verdict(2, worst < 1e-9 && dt < 120, "100 certificates, max residual " + num(worst) + ", " + num(dt) + " s");
}

void report_criterion(int id, const fs::path& file, const std::vector<std::string>& metrics, double dt,
                      double limit)
{
    const auto lines = report({file}, {});
    bool pass = dt < limit;
    std::string detail;
    for (const auto& m : metrics) {
        const auto* l = line_for(lines, m);
        pass = pass && l && l->pass;
        detail += m + " = " + (l ? num(l->value) : std::string("missing")) + ", ";
    }
    verdict(id, pass, detail + num(dt) + " s");
}

void c3()
{
    const auto t0 = Clock::now();
    auto j = json::parse(R"({"kind":"wegner1","seed":301,"trials":2000,
        "model":{"particles":1,"dim":1,"disorder_coupling":1,"energy_window":1},
        "geometry":{"center":[[0]],"radius":8,"energy":0.5,
                    "s_grid":{"log_min":-4,"log_max":0,"points":41}}})");
    run_json(j, "c3_wegner1.csv");
    report_criterion(3, work_dir() / "c3_wegner1.csv", {"theta"}, seconds_since(t0), 300);
}

void c4()
{
    const auto t0 = Clock::now();
    auto j = json::parse(R"({"kind":"wegner2","seed":401,"trials":2000,
        "model":{"particles":2,"dim":1,"disorder_coupling":1,"energy_window":1},
        "geometry":{"centers":[[[0],[0]],[[0],[40]]],"radius":4,
                    "s_grid":{"log_min":-4,"log_max":-1,"points":31}}})");
    const auto r = run_json(j, "c4_wegner2.csv");
    info(4, "C-hat = max p(s)/s^(2/3) on [1e-4, 1e-1] = " + r.summary.value("fitted_constant", json()).dump() +
                ", theta = " + r.summary.value("theta", json()).dump() + ", separation d_S = 40 > 4NL = 32");

    // Held-out diagnostic: constant from the top decade only, checked on the lower two.
    const auto p = read_result(work_dir() / "c4_wegner2.csv");
    EvcResult e;
    e.s_grid = p.column("s");
    e.prob = p.column("prob");
    const auto se = p.column("stderr");
    const double top = two_thirds_constant(e, 1e-2, 1e-1);
    std::size_t above = 0, significant = 0;
    for (std::size_t i = 0; i < e.s_grid.size(); ++i) {
        const double bound = top * std::pow(e.s_grid[i], 2.0 / 3.0);
        above += e.prob[i] > bound;
        significant += e.prob[i] > bound + 3.0 * se[i];
    }
    info(4, "top-decade C-hat " + num(top) + ": " + std::to_string(above) + " grid points above it, " +
                std::to_string(significant) + " by more than 3 stderr");
    report_criterion(4, work_dir() / "c4_wegner2.csv", {"violations"}, seconds_since(t0), 900);
}

void c5()
{
    const auto t0 = Clock::now();
    std::size_t dominated = 0, failed = 0, drawn = 0;
    for (std::uint64_t t = 0; dominated < 10000; ++t) {
        ++drawn;
        auto gf = random_graph_function(trial_key(501, tag_of("dominated"), t));
        DominationContext ctx(gf);
        if (!ctx.dominated())
            continue;
        const auto cover = tight_cover(ctx);
        if (cover_width(cover) > gf.radius - gf.scale)
            continue;
        ++dominated;
        const auto b = dominated_bound(gf, cover);
        failed += !(b.center_value <= b.bound);
    }
    const double dt = seconds_since(t0);
    verdict(5, failed == 0 && dt < 60,
            std::to_string(dominated) + " dominated instances (" + std::to_string(drawn) + " drawn), " +
                std::to_string(failed) + " bound failures, " + num(dt) + " s");
}

void c6()
{
    const auto t0 = Clock::now();
    std::size_t premises = 0, violations = 0;
    std::string detail;
    for (int n = 1; n <= 2; ++n) {
        json model = {{"particles", n}, {"dim", 1}, {"disorder_coupling", 20}};
        json center = n == 1 ? json::parse("[[0]]") : json::parse("[[0],[1]]");
        json gri = {{"kind", "gri-measure"}, {"seed", 600 + n}, {"trials", 100}, {"model", model},
                    {"geometry", {{"center", center}, {"radius", 4}, {"outer_radius", 12}, {"energy", 0.5}}}};
        const double c_gri = run_json(gri, "c6_gri" + std::to_string(n) + ".csv").summary.at("max_ratio");
        json bg = {{"kind", "bad-good"}, {"seed", 610 + n}, {"trials", 500}, {"model", model},
                   {"params", {{"max_particles", 2}, {"initial_scale", 4}, {"growth", 3}}},
                   {"options", {{"c_gri", c_gri}}},
                   {"geometry", {{"center", center}, {"energy", 0.5}}}};
        const auto r = run_json(bg, "c6_badgood" + std::to_string(n) + ".csv");
        const std::size_t p = r.summary.at("premises"), v = r.summary.at("violations");
        premises += p;
        violations += v;
        detail += "N=" + std::to_string(n) + ": C_GRI " + num(c_gri) + ", premises " + std::to_string(p) +
                  ", violations " + std::to_string(v) + "; ";
    }
    verdict(6, violations == 0 && premises >= 500, detail + num(seconds_since(t0)) + " s");

    // Weak disorder for contrast: the implication is not expected to hold there.
    json weak = {{"kind", "bad-good"}, {"seed", 620}, {"trials", 500},
                 {"model", {{"particles", 1}, {"dim", 1}, {"disorder_coupling", 1}}},
                 {"params", {{"max_particles", 2}, {"initial_scale", 4}, {"growth", 3}}},
                 {"options", {{"c_gri", 0.5}}},
                 {"geometry", {{"center", json::parse("[[0]]")}, {"energy", 0.5}}}};
    const auto w = run_json(weak, "c6_weak.csv");
    info(6, "g = 1, N = 1: premises " + w.summary.at("premises").dump() + ", violations " +
                w.summary.at("violations").dump());
}

void c7()
{
    CounterRng rng(0xacc7);
    int done = 0, bad_norm = 0;
    double worst_sum = 0.0, worst_ratio = 0.0;
    while (done < 60) {
        ModelSpec spec;
        spec.particles = oracle::uniform_int(rng, 2, 3);
        spec.interaction_amplitude = rng.uniform(0.1, 3.0);
        spec.interaction_exponent = rng.uniform(0.2, 1.0);
        spec.disorder_coupling = rng.uniform(0.5, 5.0);
        const int l = oracle::uniform_int(rng, 1, spec.particles == 2 ? 4 : 2);
        Cube cube(oracle::random_configuration(rng, spec.particles, 1, 24 * l), l);
        if (classify_wi_si(cube) != Interactivity::Weak)
            continue;
        ++done;
        auto sample = sample_disorder(cube.projection_sites(), rng(), spec);
        const auto r = wi_tensor_check(cube, sample, spec);
        bad_norm += !(r.cross_interaction_max <= r.gap_bound);
        worst_sum = std::max(worst_sum, r.sum_residual);
        if (r.gap_bound > 0.0)
            worst_ratio = std::max(worst_ratio, r.cross_interaction_max / r.gap_bound);
    }
    verdict(7, bad_norm == 0 && worst_sum <= 1e-9,
            std::to_string(done) + " WI cubes, norm-bound failures " + std::to_string(bad_norm) +
                ", max norm/bound " + num(worst_ratio) + ", max sum residual " + num(worst_sum));
}

void c8()
{
    const auto t0 = Clock::now();
    auto j = json::parse(R"({"kind":"etv","seed":801,"trials":200,
        "model":{"particles":1,"dim":1,"disorder_coupling":20,"energy_window":1},
        "params":{"max_particles":2,"initial_scale":4,"growth":3},
        "geometry":{"center":[[0]],"radius":8}})");
    const auto r = run_json(j, "c8_etv.csv");
    info(8, "budget |I*| q/b = " + r.summary.at("budget").dump() + ", exceed-and-covered check on " +
                std::to_string(r.rows.size()) + " samples");
    report_criterion(8, work_dir() / "c8_etv.csv", {"violation_frequency"}, seconds_since(t0), 600);
}

void c9()
{
    const auto t0 = Clock::now();
    auto j = json::parse(R"({"kind":"efc-decay","seed":901,"trials":200,
        "model":{"particles":2,"dim":1,"disorder_coupling":50,"energy_window":50},
        "geometry":{"r_list":[4,5,6,7,8,9,10,11,12],"pattern":"pair"}})");
    const auto r = run_json(j, "c9_efc.csv");
    const double dt = seconds_since(t0);
    const auto p = read_result(work_dir() / "c9_efc.csv");
    const auto rs = p.column("R"), means = p.column("mean"), fails = p.column("dominance_failures");

    double dominance = 0.0;
    for (double f : fails)
        dominance += f;
    std::vector<double> even_r, even_log;
    bool decreasing = true;
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (static_cast<int>(rs[i]) % 2 == 0 && means[i] > 0.0) {
            if (!even_log.empty() && !(std::log(means[i]) < even_log.back()))
                decreasing = false;
            even_r.push_back(rs[i]);
            even_log.push_back(std::log(means[i]));
        }
    const auto fit = linear_fit(even_r, even_log);
    verdict(9, decreasing && fit.slope < 0 && fit.p_value < 0.01 && dominance == 0 && even_r.size() == 5 && dt < 1200,
            "R = 4,6,8,10,12: strictly decreasing " + std::string(decreasing ? "yes" : "no") + ", slope " +
                num(fit.slope) + ", p " + num(fit.p_value) + ", dominance failures " + num(dominance) + ", " +
                num(dt) + " s");
    const auto full = report({work_dir() / "c9_efc.csv"}, {});
    std::string all;
    for (const char* m : {"slope", "p_value", "strictly_decreasing"})
        if (const auto* l = line_for(full, m))
            all += std::string(m) + " = " + num(l->value) + ", ";
    info(9, "all R = 4..12: " + all + "E* = 50");
}

void c10()
{
    auto w1 = json::parse(R"({"kind":"wegner1","seed":1001,"trials":1000,
        "model":{"particles":1,"dim":1},
        "geometry":{"center":[[0]],"radius":6,"energy":0.5,"s_grid":{"log_min":-3,"log_max":0,"points":13}}})");
    auto bg = json::parse(R"({"kind":"bad-good","seed":1002,"trials":100,
        "model":{"particles":1,"dim":1,"disorder_coupling":20},
        "params":{"max_particles":2,"initial_scale":4,"growth":3},
        "geometry":{"center":[[0]],"energy":0.5}})");
    auto efc = json::parse(R"({"kind":"efc-decay","seed":1003,"trials":20,
        "model":{"particles":2,"dim":1,"disorder_coupling":50,"energy_window":50},
        "geometry":{"r_list":[2,4],"pattern":"pair"},"options":{"time_samples":10}})");
    bool pass = true;
    std::string detail;
    int idx = 0;
    for (auto j : {w1, bg, efc}) {
        const std::string kind = j["kind"];
        const std::string stem = "c10_" + std::to_string(idx++);
        j["workers"] = 1;
        const auto a = run_json(j, stem + "_a.csv");
        const auto b = run_json(j, stem + "_b.csv");
        j["workers"] = 8;
        const auto c = run_json(j, stem + "_w8.csv");
        const bool same = a.data_block() == b.data_block() && a.data_block() == c.data_block() &&
                          a.content_id == git_blob_id(a.data_block()) && a.content_id == c.content_id;
        pass = pass && same;
        detail += kind + (same ? " identical" : " DIFFERS") + ", ";
    }
    verdict(10, pass, detail + "1 vs 8 workers and rerun");
}

} // namespace

int main()
{
    fs::create_directories(work_dir());
    std::cout << "acceptance scratch: " << work_dir().string() << "\n";
    const std::vector<void (*)()> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            verdict(static_cast<int>(i) + 1, false, std::string("exception: ") + e.what());
        }
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
