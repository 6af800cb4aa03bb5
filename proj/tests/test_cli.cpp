#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmlab/cli.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/fn_io.hpp"
#include "qmlab/tables.hpp"

using qm::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

json call_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    const auto r = call(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

std::string fixture(const char* name) { return std::string(QMLAB_FIXTURES) + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qmlab_test_" + name);
}

}  // namespace

TEST_CASE("corner commands") {
    const auto r = call({"corner", "q", "--gamma", "2", "--p", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "Q=1.125\nk=2\n");

    const auto j = call_json({"corner", "optimal", "--q", "1.125", "--p", "2"});
    CHECK(j["gamma"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["Q"].get<double>() == doctest::Approx(1.125).epsilon(1e-12));

    const auto g = call_json({"corner", "gamma", "--q", "1.125", "--p", "2"});
    CHECK(g.get<double>() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bound, power and blowup commands") {
    CHECK(call({"bound", "min2", "--q1", "1.125", "--q2", "1.125"}).out == "1.191176471\n");
    CHECK(call({"bound", "km", "--q1", "1.125", "--q2", "1.125"}).out == "1.265625\n");
    const auto m3 = call_json({"bound", "min3", "--q1", "2", "--q2", "3", "--q3", "4"});
    CHECK(m3.get<double>() == doctest::Approx(5.886843591191417).epsilon(1e-14));
    const auto sys = call_json({"bound", "system", "--q1", "2", "--q2", "3", "--q3", "4"});
    CHECK(sys["Q_A0"].get<double>() == doctest::Approx(5.886843591191417).epsilon(1e-12));
    CHECK(sys["x_pair"].size() == 3);

    const auto qa = call_json({"power", "qalpha", "--alpha", "2", "--p", "2"});
    CHECK(qa.get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    const auto br = call_json({"power", "branches", "--q", "2", "--p", "2"});
    CHECK(br["alpha"].get<double>() > 1.0);
    CHECK(br["alpha_prime"].get<double>() < 1.0);
    const auto qt = call_json({"power", "qtilde", "--q1", "2", "--q2", "2", "--p", "2"});
    CHECK(qt["q_tilde"].get<double>() == doctest::Approx(2.619135721).epsilon(1e-9));
    CHECK(qt.contains("qt_bound1"));
    const auto qt3 = call_json({"power", "qtilde", "--q1", "2", "--q2", "2", "--p", "3"});
    CHECK(!qt3.contains("qt_bound1"));

    const auto bl = call_json({"blowup", "--q1", "2", "--q2", "2", "--p", "2"});
    CHECK(bl["max_q"].get<double>() == 2.0);
    CHECK(bl["upper_bound"].get<double>() == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(bl["q_tilde"].get<double>() < bl["upper_bound"].get<double>());
}

TEST_CASE("lp command") {
    const auto j = call_json({"lp", "--q", "2,3", "--multipliers"});
    CHECK(j["N"] == 2);
    CHECK(j["bound"].get<double>() == doctest::Approx(3.6).epsilon(1e-12));
    CHECK(j["status"] == "reference");
    CHECK(!j["multipliers"].empty());
    for (const auto& m : j["multipliers"]) {
        CHECK(m["i"].get<int>() >= 1);
        for (const auto& s : m["S"]) CHECK(s.get<int>() >= 1);
    }
    const auto four = call_json({"lp", "--q", "2,3,4,5"});
    CHECK(four["status"] == "exploratory");
    CHECK(four["bound"].get<double>() == doctest::Approx(8.912731074907422).epsilon(1e-10));
    CHECK(call({"lp", "--q", "2,x"}).code == 2);
    CHECK(call({"lp", "--q", "2,3", "--symmetrize"}).code == 2);
}

TEST_CASE("paste commands") {
    const auto s = call_json({"paste", "sharp", "--q1", "2", "--q2", "3", "--p", "2"});
    CHECK(s["achieved_energy"].get<double>() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(s["omega1"].size() == 2);
    const auto i = call_json({"paste", "interval", "--q1", "2", "--q2", "3", "--p", "2", "--variant", "second"});
    CHECK(i["variant"] == "second");
    CHECK(i["achieved_energy"].get<double>() > i["claimed_bound"].get<double>());
    const auto sw = call_json({"paste", "sweep", "--q1", "2", "--q2", "3", "--p-list", "2,4"});
    REQUIRE(sw.size() == 2);
    CHECK(sw[1]["p"].get<double>() == 4.0);
    CHECK(call({"paste", "interval", "--q1", "2", "--q2", "3", "--p", "2", "--variant", "third"}).code == 2);

    const auto path = temp_path("sharp.json");
    CHECK(call({"paste", "sharp", "--q1", "2", "--q2", "3", "--p", "2", "--export", path.string()}).code == 0);
    const auto u = qm::io::read_function_file(path.string());
    CHECK(u.lo() == 0.0);
    CHECK(u.hi() == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("fn commands on fixtures") {
    const auto e = call({"fn", "energy", "--input", fixture("ex1_min.json"), "--p", "2"});
    CHECK(e.code == 0);
    CHECK(e.out == "1.166666667\n");
    const auto q = call_json({"fn", "qconst", "--input", fixture("ex1_u1.json"), "--p", "2"});
    CHECK(q["value"].get<double>() == doctest::Approx(1.125).epsilon(1e-9));
    const auto m = call_json({"fn", "min", "--input", fixture("ex1_u1.json"), "--input", fixture("ex1_u2.json")});
    const auto expected = qm::io::read_function_file(fixture("ex1_min.json"));
    REQUIRE(m["breakpoints"].size() == expected.breakpoints().size());
    for (std::size_t k = 0; k < expected.breakpoints().size(); ++k) {
        CHECK(m["breakpoints"][k].get<double>() == doctest::Approx(expected.breakpoints()[k]).epsilon(1e-15));
        CHECK(m["values"][k].get<double>() == doctest::Approx(expected.values()[k]).epsilon(1e-15));
    }
    const auto env = call({"--format", "csv", "fn", "envelope", "--input", fixture("ex1_min.json")});
    CHECK(env.code == 0);
    CHECK(env.out.rfind("x,y\n", 0) == 0);
    const auto part = call_json({"fn", "energy", "--input", fixture("ex1_u1.json"), "--p", "2", "--interval", "0,0.5"});
    CHECK(part.get<double>() == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 2);
    CHECK(call({"bound", "min2", "--q1", "1.125"}).code == 2);
    CHECK(call({"bound", "min2", "--q1", "0.5", "--q2", "2"}).code == 2);
    CHECK(call({"--format", "xml", "bound", "min2", "--q1", "2", "--q2", "2"}).code == 2);
    CHECK(call({"fn", "energy", "--input", "/nonexistent/f.json", "--p", "2"}).code == 2);
    CHECK(call({"fn", "min", "--input", fixture("ex1_u1.json")}).code == 2);
    CHECK(call({"corner", "q", "--gamma", "1e6", "--p", "1000"}).code == 0);
    CHECK(call({"power", "branches", "--q", "2", "--p", "2", "--max-iter", "1"}).code == 3);
    CHECK(call({"--help"}).code == 0);

    const auto bad = temp_path("bad.json");
    std::ofstream(bad) << "{\"breakpoints\": [0, 1], \"values\": [0]}";
    CHECK(call({"fn", "energy", "--input", bad.string(), "--p", "2"}).code == 2);
    std::ofstream(bad) << "not json";
    CHECK(call({"fn", "energy", "--input", bad.string(), "--p", "2"}).code == 2);
    std::filesystem::remove(bad);
}

TEST_CASE("table output round trips") {
    const auto csv = call({"--format", "csv", "table", "--name", "2"});
    REQUIRE(csv.code == 0);
    std::istringstream cin(csv.out);
    const auto rows = qm::cli::rows_from_csv(cin);
    REQUIRE(rows.size() == 30);
    CHECK(rows == qm::tables::table2());

    const auto js = call({"--format", "json", "table", "--name", "1"});
    REQUIRE(js.code == 0);
    std::istringstream jin(js.out);
    const auto jrows = qm::cli::rows_from_json(jin);
    CHECK(jrows == qm::tables::table1());
    std::istringstream again(qm::cli::rows_to_json(jrows));
    CHECK(qm::cli::rows_from_json(again) == jrows);

    const auto text = call({"table", "--name", "1"});
    CHECK(text.out == qm::cli::rows_to_text(qm::tables::table1()));
    std::istringstream broken("Q,p,value,kind\n1,2,3,nope\n");
    CHECK_THROWS_AS(qm::cli::rows_from_csv(broken), qm::InputError);
}

TEST_CASE("format from environment, output file, determinism") {
    ::setenv("QMLAB_FORMAT", "json", 1);
    const auto env = call({"bound", "min2", "--q1", "2", "--q2", "3"});
    ::unsetenv("QMLAB_FORMAT");
    CHECK(json::parse(env.out).get<double>() == doctest::Approx(3.6).epsilon(1e-15));

    const auto path = temp_path("out.txt");
    const auto r = call({"--out", path.string(), "bound", "min2", "--q1", "2", "--q2", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "3.6");
    std::filesystem::remove(path);

    const std::vector<std::string> args{"--format", "json", "lp", "--q", "2,3,4", "--multipliers"};
    CHECK(call(args).out == call(args).out);
    CHECK(qm::cli::format_from_name("csv") == qm::cli::Format::Csv);
    CHECK_THROWS_AS(qm::cli::format_from_name("yaml"), qm::InputError);
}
