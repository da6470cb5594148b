#include "doctest.h"

#include "abwave/cli.hpp"
#include "abwave/diffraction.hpp"
#include "abwave/mode_sum.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace abwave;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli_run(std::vector<std::string> args) {
    args.insert(args.begin(), "abwave-cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const std::vector<std::string> tiny = {"--n", "16", "--k_max", "8", "--r1", "0.1", "--r2", "0.1",
                                       "--lambda_center", "6", "--lambda_halfwidth", "1", "--t_half_width", "0.1"};

}  // namespace

TEST_CASE("coeff") {
    auto r = cli_run({"coeff", "--alpha", "0.5", "--r1", "1", "--r2", "1", "--theta1", "0", "--theta2", "0"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["a0_re"].get<double>() == -0.5);
    CHECK(j["a0_im"].get<double>() == 0.0);
    CHECK(j["forms_agreement"].get<double>() < 1e-15);

    r = cli_run({"coeff", "--alpha", "0.25", "--dtheta", "0"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["a0_re"].get<double>() == doctest::Approx(-0.35355).epsilon(1e-5));

    r = cli_run({"coeff", "--dtheta", "3.14159265"});
    CHECK(r.code == 2);
    CHECK(r.err.find("|dtheta| = pi") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("kernel csv") {
    auto args = tiny;
    args.insert(args.begin(), "kernel");
    const auto t0 = std::chrono::steady_clock::now();
    auto r = cli_run(args);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 5.0);
    REQUIRE(r.code == 0);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "t,re,im,mode_tail,quad_err");
    CHECK(rows.size() == 16);
    for (const auto& row : rows) CHECK(row.size() == 5);
    // 17 significant digits survive the round trip
    CHECK(rows[1][0] == 0.2 - 0.1 + 0.2 / 15);

    // byte-identical re-run through the output file
    const std::string p1 = "kernel_run1.csv", p2 = "kernel_run2.csv";
    auto a1 = args, a2 = args;
    a1.insert(a1.end(), {"--output", p1});
    a2.insert(a2.end(), {"--output", p2});
    REQUIRE(cli_run(a1).code == 0);
    REQUIRE(cli_run(a2).code == 0);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1) == r.out);
    std::remove(p1.c_str());
    std::remove(p2.c_str());

    // the same k_max at unit radii cannot meet the tail tolerance
    r = cli_run({"kernel", "--n", "16", "--k_max", "8"});
    CHECK(r.code == 3);
    CHECK(r.err.find("k_max") != std::string::npos);
}

TEST_CASE("kernel at vanishing flux matches the free reference") {
    const auto g = FrequencyWindow::gaussian(40.0, 4.0);
    const double rho = separation(PolarPoint{2.0, 0.25}, PolarPoint{2.0, -0.25});
    auto r = cli_run({"kernel", "--alpha", "1e-6", "--r1", "2", "--r2", "2", "--dtheta", "0.5", "--lambda_center",
                      "40", "--lambda_halfwidth", "4", "--tail_tol", "1e-12", "--t_center", std::to_string(rho + 1.075),
                      "--t_half_width", "0.025", "--n", "5"});
    REQUIRE(r.code == 0);
    for (const auto& row : parse_csv(r.out)) {
        const double ref = mode_sum_scale * windowed_free_kernel(row[0], rho, g);
        CHECK(std::abs(cplx(row[1], row[2]) - ref) <= 1e-3 * std::fabs(ref));
    }
}

TEST_CASE("probe") {
    auto r = cli_run({"probe"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["rel_mag_err"].get<double>() <= 0.10);
    CHECK(j["pass"].get<bool>());
    const auto c = json::parse(cli_run({"coeff", "--alpha", "0.5", "--dtheta", std::to_string(pi / 3)}).out);
    CHECK(j["theory_re"].get<double>() == doctest::Approx(c["a0_re"].get<double>()).epsilon(1e-6));
    CHECK(j["theory_im"].get<double>() == doctest::Approx(c["a0_im"].get<double>()).epsilon(1e-6));
    // default angles are +-pi/6 exactly, so the theory field matches the default coeff bit for bit
    const auto c_default = json::parse(cli_run({"coeff"}).out);
    CHECK(j["theory_re"] == c_default["a0_re"]);
    CHECK(j["theory_im"] == c_default["a0_im"]);

    r = cli_run({"probe", "--band_lo", "5"});
    CHECK(r.code == 2);
    r = cli_run({"probe", "--window", "bump"});
    CHECK(r.code == 1);
    // an unreachable tolerance turns the report into a criterion failure
    r = cli_run({"probe", "--tolerance", "1e-9"});
    CHECK(r.code == 4);
    CHECK_FALSE(json::parse(r.out)["pass"].get<bool>());
}

TEST_CASE("config file and validation") {
    const std::string path = "cli_test.cfg";
    {
        std::ofstream f(path);
        f << "# demo\nalpha = 0.3\ndtheta = 1.0\nr2 = 4\n";
    }
    auto r = cli_run({"coeff", "--config", path});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["alpha"].get<double>() == 0.3);
    CHECK(j["dtheta"].get<double>() == 1.0);
    CHECK(j["r2"].get<double>() == 4.0);
    // flags override the file
    j = json::parse(cli_run({"coeff", "--config", path, "--alpha", "0.7"}).out);
    CHECK(j["alpha"].get<double>() == 0.7);
    CHECK(j["r2"].get<double>() == 4.0);
    {
        std::ofstream f(path);
        f << "alpah = 0.3\n";
    }
    r = cli_run({"coeff", "--config", path});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    std::remove(path.c_str());

    CHECK(cli_run({"coeff", "--alpha", "1.5"}).code == 1);
    CHECK(cli_run({"coeff", "--dtheta", "1", "--theta1", "0"}).code == 1);
    CHECK(cli_run({"kernel", "--k_max", "many"}).code == 1);
    CHECK(cli_run({"kernel", "--format", "xml"}).code == 1);
    CHECK(cli_run({"kernel", "--lambda_center", "10"}).code == 1);  // gaussian needs c >= 6 sigma
    CHECK(cli_run({"--alpha", "0.5"}).code == 1);                    // no subcommand
    CHECK(cli_run({"nonsense"}).code == 1);
    CHECK(cli_run({"--help"}).code == 0);
}

TEST_CASE("json tables") {
    auto args = tiny;
    args.insert(args.begin(), "kernel");
    args.insert(args.end(), {"--format", "json"});
    auto r = cli_run(args);
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    REQUIRE(j.size() == 16);
    CHECK(j[0].contains("mode_tail"));
}

TEST_CASE("debug subcommands") {
    auto r = cli_run({"bessel", "--nu", "0.5", "--x", "1.5707963267948966"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["value_re"].get<double>() == doctest::Approx(2.0 / pi).epsilon(1e-15));
    r = cli_run({"bessel", "--kind", "k", "--nu", "0.5", "--x", "2"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["value_re"].get<double>() ==
          doctest::Approx(std::sqrt(pi / 4.0) * std::exp(-2.0)).epsilon(1e-12));
    CHECK(cli_run({"bessel", "--nu", "-1", "--x", "2"}).code == 2);

    r = cli_run({"pairing", "--alpha", "0.25"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["contour_re"].get<double>() == doctest::Approx(-0.75 * pi).epsilon(1e-10));
    CHECK(std::fabs(j["area_re"].get<double>() - j["contour_re"].get<double>()) < 1e-3);

    r = cli_run({"lkernel", "--r1", "2", "--lambda_center", "15", "--lambda_halfwidth", "2.5", "--n", "3"});
    REQUIRE(r.code == 0);
    CHECK(parse_csv(r.out).size() == 3);

    r = cli_run({"abel", "--alpha", "0.5"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows.size() == 9);
    CHECK(rows[4][0] == 0.0);
    CHECK(rows[4][5] < 1e-6);  // alpha = 1/2, dtheta = 0 sums to -1 quickly
}

TEST_CASE("verify fast suite") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = cli_run({"verify", "--suite", "fast"});
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
    const auto b = cli_run({"verify", "--suite", "fast"});
    CHECK(a.out == b.out);
    const auto j = json::parse(a.out);
    REQUIRE(j["criteria"].size() == 4);
    std::vector<int> ids;
    bool all = true;
    for (const auto& e : j["criteria"]) {
        ids.push_back(e["criterion_id"].get<int>());
        for (const char* k : {"description", "paper_anchor", "measured", "tolerance", "pass"}) CHECK(e.contains(k));
        all = all && e["pass"].get<bool>();
    }
    CHECK(ids == std::vector<int>{1, 3, 5, 6});
    CHECK(j["pass"].get<bool>() == all);
    CHECK(a.code == (all ? 0 : 4));
    CHECK(cli_run({"verify", "--suite", "slow"}).code == 1);
}
