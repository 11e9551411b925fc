#include "helpers.hpp"
#include "zigzag/config.hpp"
#include "zigzag/report_io.hpp"
#include "zigzag/verify.hpp"

#include <doctest.h>
#include <random>
#include <sstream>

using namespace zigzag;
using doctest::Approx;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');)
            cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("17 significant digits round-trip")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, i % 20 - 10);
        CHECK(std::stod(fmt17(x)) == x);
    }
}

TEST_CASE("discriminant CSV")
{
    const auto z = Potential::zero();
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i)
        grid.push_back(-5.0 + 0.37 * i);
    const std::vector<ChannelParams> chs{ChannelParams::make(3, 0, 0.0), ChannelParams::make(3, 1, 0.0)};
    const auto rows = tabulate_discriminant(z, grid, chs);
    std::ostringstream os;
    write_discriminant_csv(os, rows, chs);
    const auto csv = read_csv(os.str());
    REQUIRE(csv.size() == grid.size() + 1);
    CHECK(csv[0].size() == 2 + 6 * chs.size());
    CHECK(csv[0][2] == "T_0");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(std::stod(csv[i + 1][0]) == rows[i].lambda);
        CHECK(std::stod(csv[i + 1][1]) == rows[i].F);
        CHECK(std::stod(csv[i + 1][9]) == rows[i].channels[1].R);
        CHECK(std::abs(rows[i].F - free_F(rows[i].lambda)) <= 1e-9);
    }

    // a = pi/6 and a = pi/3 share F; only the channel columns move
    const auto r1 = tabulate_discriminant(z, grid, {ChannelParams::make(3, 1, kPi / 6 + 0.01)});
    const auto r2 = tabulate_discriminant(z, grid, {ChannelParams::make(3, 1, kPi / 3)});
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(r1[i].F == r2[i].F);
}

TEST_CASE("bands CSV for N = 1 and for a flat channel")
{
    const auto z = Potential::zero();
    std::ostringstream os;
    write_bands_csv(os, {full_spectrum(z, 1, 0.0, {-1.0, 100.0})});
    const auto csv = read_csv(os.str());
    CHECK(csv[0] == std::vector<std::string>{"B", "a", "k", "n", "lo", "hi", "kind"});
    const double A = std::acos(-7.0 / 9);
    REQUIRE(csv.size() > 3);
    CHECK(std::stod(csv[1][5]) == Approx(std::pow(A / 2, 2)).epsilon(1e-11));
    CHECK(std::stod(csv[2][4]) == Approx(std::pow(kPi - A / 2, 2)).epsilon(1e-11));
    CHECK(csv[1][6] == "periodic:antiperiodic");

    std::ostringstream fs;
    write_bands_csv(fs, {full_spectrum(z, 3, 4 * kPi / 9, {-1.0, 60.0})});
    int flat = 0;
    for (const auto& r : read_csv(fs.str()))
        if (r[2] == "1") {
            CHECK(r[6] == "flat");
            ++flat;
        }
    CHECK(flat > 0);
}

TEST_CASE("gap rows complement the union rows")
{
    const auto rep = full_spectrum(testing::mathieu(), 3, 1.0, {-3.0, 150.0});
    std::ostringstream b, g;
    write_bands_csv(b, {rep});
    write_gaps_csv(g, {rep});
    std::vector<std::pair<double, double>> uni, gaps;
    for (const auto& r : read_csv(b.str()))
        if (r[6] == "union")
            uni.push_back({std::stod(r[4]), std::stod(r[5])});
    const auto grows = read_csv(g.str());
    for (std::size_t i = 1; i < grows.size(); ++i)
        gaps.push_back({std::stod(grows[i][3]), std::stod(grows[i][4])});
    REQUIRE(gaps.size() + 1 == uni.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        CHECK(gaps[i].first == uni[i].second);
        CHECK(gaps[i].second == uni[i + 1].first);
    }
}

TEST_CASE("flat points and eigenfunction CSV")
{
    const auto rep = full_spectrum(Potential::zero(), 3, 4 * kPi / 9, {-1.0, 30.0});
    std::ostringstream os;
    write_flat_points_csv(os, {rep});
    const auto csv = read_csv(os.str());
    CHECK(csv[0] == std::vector<std::string>{"B", "a", "k", "lambda", "kind"});
    CHECK(csv[1][4] == "antiperiodic-flat");
    CHECK(csv.back()[4] == "dirichlet");

    std::ostringstream es;
    write_eigenfunction_csv(es, {{0, 1, 0.5, {1.0, -2.0}}});
    CHECK(es.str() == "n,j,t,re_f,im_f\n0,1,0.5,1,-2\n");
}

TEST_CASE("potential JSON")
{
    const auto q = Potential::piecewise({{0.3, 1.5}, {0.7, -0.25}});
    const auto back = potential_from_json(to_json(q));
    CHECK(back.digest() == q.digest());
    const auto s = testing::mathieu(2.0, 65);
    CHECK(potential_from_json(to_json(s)).digest() == s.digest());
    const auto f = potential_from_json(nlohmann::json::parse(R"({"type":"fourier","cos":[2.0],"samples":1025})"));
    CHECK(f.digest() == testing::mathieu().digest());
    CHECK_THROWS_WITH_AS(potential_from_json(nlohmann::json::parse(R"({"type":"piecewise","segments":[[0.5,1],[0.5]]})")),
                         doctest::Contains("segments/1"), ValidationError);
    CHECK_THROWS_AS(potential_from_json(nlohmann::json::parse(R"({"type":"spline"})")), ValidationError);
}

TEST_CASE("config parsing and validation")
{
    const auto c = parse_config(R"({"N": 4, "B": 1.5, "lambda_max": 50, "channels": [0, 3],
                                    "b_sweep": {"min": 0, "max": 2, "steps": 5},
                                    "tolerances": {"tol_F": 1e-7}, "seed": 9,
                                    "potential": {"type": "samples", "values": [0, 1, 0]}})");
    CHECK(c.N == 4);
    CHECK(c.flux() == Approx(flux_from_field(4, 1.5)));
    CHECK(c.channel_list() == std::vector<int>{0, 3});
    CHECK(c.b_sweep->grid().size() == 5);
    CHECK(c.b_sweep->grid()[4] == 2.0);
    CHECK(c.scan.tol_F == 1e-7);
    CHECK(c.seed == 9);
    CHECK(c.window().hi == 50.0);
    CHECK(parse_config("{}").field() == 0.0);
    CHECK(parse_config(R"({"a": 0.5, "N": 3})").field() == Approx(0.5 / flux_from_field(3, 1.0)));

    CHECK(config_error("{\n  \"N\": 3,\n  \"B\": ,\n}").find("line 3") != std::string::npos);
    CHECK(config_error(R"({"N": "three"})").find("/N") != std::string::npos);
    CHECK(config_error(R"({"B": 1, "a": 2})").find("exactly one") != std::string::npos);
    CHECK(config_error(R"({"lambda_max": -1})").find("/lambda_max") != std::string::npos);
    CHECK(config_error(R"({"colour": 1})").find("/colour") != std::string::npos);
    CHECK(config_error(R"({"N": 3, "channels": [0, 5]})").find("/channels/1") != std::string::npos);
    CHECK(config_error(R"({"tolerances": {"tol_F": "x"}})").find("/tolerances/tol_F") != std::string::npos);
    CHECK(config_error(R"({"potential": {"type": "samples", "values": [1, "a"]}})").find("/potential/values/1") !=
          std::string::npos);
    CHECK(config_error(R"({"eigenfunction": {"kind": "odd"}})").find("/eigenfunction/kind") != std::string::npos);
}

TEST_CASE("command-line value parsing")
{
    const auto s = parse_field_spec("0:2:21");
    CHECK(s.steps == 21);
    CHECK(s.grid()[10] == Approx(1.0));
    CHECK(parse_field_spec("1.25").steps == 1);
    CHECK_THROWS_AS(parse_field_spec("1:0:3"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_field_spec("0:1:2.5"), ConfigError);
    CHECK(parse_channel_list("0,2,5") == std::vector<int>{0, 2, 5});
    CHECK_THROWS_AS(parse_channel_list("0,x"), ConfigError);
}

TEST_CASE("verification report is deterministic")
{
    VerifyOptions opt;
    const auto a = to_json(run_checks(opt, {"1", "2", "5", "T"}), opt).dump();
    const auto b = to_json(run_checks(opt, {"1", "2", "5", "T"}), opt).dump();
    CHECK(a == b);
    VerifyOptions loose = opt;
    loose.scan.tol_F = 1e-2;
    const auto r = run_checks(loose, {"T"});
    REQUIRE(r.size() == 1);
    CHECK(!r[0].pass);
}
