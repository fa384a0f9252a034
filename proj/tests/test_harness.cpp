#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anderson/harness.hpp"
#include "oracles.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace anderson;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("anderson-harness-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// File contents minus the wall-clock line.
std::string without_timing(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("# wall_seconds", 0) != 0)
            out += line + "\n";
    return out;
}

json wegner1_config()
{
    return json::parse(R"({"kind":"wegner1","seed":11,"trials":600,
        "model":{"particles":1,"dim":1},
        "geometry":{"center":[[0]],"radius":4,"energy":0.5,
                    "s_grid":{"log_min":-3,"log_max":0,"points":7}}})");
}

const ReportLine& find_line(const std::vector<ReportLine>& lines, const std::string& metric)
{
    for (const auto& l : lines)
        if (l.metric == metric)
            return l;
    FAIL("missing metric " << metric);
    return lines.front();
}

} // namespace

TEST_CASE("digests")
{
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(git_blob_id("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_id("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("format_double round-trips")
{
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    CounterRng rng(0x4a);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(rng.uniform(-1, 1), oracle::uniform_int(rng, -300, 300));
        REQUIRE(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("config parsing")
{
    const auto c = parse_config(wegner1_config());
    CHECK(c.kind == "wegner1");
    CHECK(c.seed == 11);
    CHECK(c.trials == 600);
    CHECK(c.workers == 1);
    CHECK(parse_config(to_json(c)) == c);

    auto j = wegner1_config();
    j.erase("seed");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["seed"] = "eleven";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["kind"] = "wegner3";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["colour"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["model"]["mass"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["trials"] = -5;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["seed"] = -1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["trials"] = 0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["geometry"].erase("radius");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = wegner1_config();
    j["workers"] = 0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    for (const auto& kind : experiment_kinds())
        CHECK_FALSE(kind.empty());
    CHECK(experiment_kinds().size() == 10);

    const auto path = scratch("cfg.json");
    write_atomic(path, wegner1_config().dump());
    CHECK(load_config(path) == c);
    CHECK_THROWS(load_config(scratch("missing.json")));
}

TEST_CASE("reruns are byte-identical and worker-count independent")
{
    auto j = wegner1_config();
    const auto a = scratch("w1a.csv"), b = scratch("w1b.csv"), w = scratch("w1w.csv");
    j["output"] = a.string();
    const auto ra = run(parse_config(j));
    j["output"] = b.string();
    const auto rb = run(parse_config(j));
    j["output"] = w.string();
    j["workers"] = 8;
    const auto rw = run(parse_config(j));

    CHECK(ra.rows.size() == 7);
    CHECK(ra.content_id == rb.content_id);
    CHECK(ra.content_id == rw.content_id);
    CHECK(ra.config_hash == rw.config_hash);
    CHECK(without_timing(slurp(a)) == without_timing(slurp(b)));
    CHECK(without_timing(slurp(a)) == without_timing(slurp(w)));
    CHECK(ra.content_id == git_blob_id(ra.data_block()));
    CHECK(fs::exists(a.string() + ".summary.json"));

    j["seed"] = 12;
    j["output"] = "";
    CHECK(run(parse_config(j)).content_id != ra.content_id);
}

TEST_CASE("read back a written result")
{
    ResultRecord r;
    r.kind = "gri-measure";
    r.config_hash = "h";
    r.header = {"trial", "ratio"};
    r.rows = {{"0", "0.25"}, {"1", "0.5"}};
    r.summary = {{"bound", 0.7}};
    r.notes = {"hello"};
    r.content_id = git_blob_id(r.data_block());
    const auto path = scratch("gri.csv");
    write_result(path, r);
    const auto p = read_result(path);
    CHECK(p.meta("kind") == "gri-measure");
    CHECK(p.meta("content_id") == r.content_id);
    CHECK(p.meta("summary.bound") == "0.7");
    CHECK(p.meta("absent", "x") == "x");
    CHECK(p.header == r.header);
    CHECK(p.column("ratio") == std::vector<double>{0.25, 0.5});
    CHECK_THROWS(p.column("nope"));
    CHECK(r.data_block() == "trial,ratio\n0,0.25\n1,0.5\n");
}

TEST_CASE("unwritable output is an error")
{
    auto j = wegner1_config();
    j["output"] = "/proc/definitely/not/here.csv";
    CHECK_THROWS(run(parse_config(j)));
}

TEST_CASE("report restates fitted quantities")
{
    CHECK_THROWS(report({}, {}));

    auto j = wegner1_config();
    j["trials"] = 2000;
    j["geometry"]["radius"] = 8;
    j["geometry"]["s_grid"] = {{"log_min", -4}, {"log_max", 0}, {"points", 41}};
    const auto w1 = scratch("rep_w1.csv");
    j["output"] = w1.string();
    run(parse_config(j));
    const auto parsed = read_result(w1);
    const auto out_dir = scratch("report");
    const auto lines = report({w1}, out_dir);
    const auto& theta = find_line(lines, "theta");
    CHECK(theta.value == loglog_slope(parsed.column("s"), parsed.column("prob")).slope);
    CHECK(theta.pass == (theta.value >= 0.9));
    CHECK(fs::exists(out_dir / "summary.csv"));
    CHECK(fs::exists(out_dir / "plot_rep_w1.csv"));

    // Synthetic decay profile checked against the closed-form regression.
    ResultRecord r;
    r.kind = "efc-decay";
    r.header = {"R", "d_sym", "d_haus", "mean", "stderr", "dominance_failures", "gk_u", "gk_h", "gk_rhs"};
    std::vector<double> rs, logs;
    CounterRng rng(0x4b);
    for (int k = 4; k <= 12; k += 2) {
        const double m = std::exp(-1.3 * std::pow(k, 0.7) + 0.01 * rng.uniform(-1, 1));
        rs.push_back(k);
        logs.push_back(std::log(std::stod(format_double(m))));
        r.rows.push_back({std::to_string(k), std::to_string(k), std::to_string(k), format_double(m), "0", "0",
                          "0", "0.1", "0.1"});
    }
    r.content_id = git_blob_id(r.data_block());
    const auto efc = scratch("rep_efc.csv");
    write_result(efc, r);
    const auto efc_lines = report({efc}, {});
    const auto o = oracle::ols(rs, logs);
    CHECK(find_line(efc_lines, "slope").value == doctest::Approx(o.slope).epsilon(1e-12));
    CHECK(find_line(efc_lines, "slope").pass);
    CHECK(find_line(efc_lines, "strictly_decreasing").pass);
    CHECK(find_line(efc_lines, "kappa_hat").value == doctest::Approx(0.7).epsilon(0.2));
}
