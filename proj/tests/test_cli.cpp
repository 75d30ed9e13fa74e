#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "arproc/errors.hpp"
#include "arproc/runner.hpp"

using namespace arproc;

namespace {

const char* kExample1 = R"({
  "model": "I",
  "V": {"kind": "atoms", "atoms": [[-1.0, 1.0]]},
  "A": {"kind": "exponential", "rate": 1.0},
  "B": {"kind": "exponential", "rate": 1.0},
  "w0": 0.0,
  "r_values": [0.5],
  "s_grid": [0.0, 0.5, 1.0],
  "sim": {"replications": 2000, "path_length": 500, "burn_in": 50, "seed": 3}
})";

// CSV rows with comment and header lines stripped, split into cells.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    bool seen_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {  // first non-comment line is the column header
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    RunConfig cfg = parse_config(R"({
      "model": "III",
      "V": {"kind": "uniform01"},
      "A": {"kind": "exponential", "rate": 2.0},
      "B": {"kind": "erlang", "shape": 2, "rate": 3.0}
    })");
    CHECK(cfg.model.model == ModelKind::III);
    CHECK(cfg.model.w0 == 0.0);
    CHECK(cfg.r_values == std::vector<double>{0.5});
    CHECK(cfg.output_format == "csv");
    CHECK(config_hash(cfg).size() == 16);
}

TEST_CASE("schema violations name the offending field") {
    std::string bad_p = R"({
      "model": "II",
      "V": {"kind": "mixed", "a": 1.0, "p": 1.2,
            "negative": {"kind": "atoms", "atoms": [[-1.0, 1.0]]}},
      "A": {"kind": "exponential", "rate": 1.0},
      "B": {"kind": "exponential", "rate": 1.0}
    })";
    try {
        parse_config(bad_p);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.field.find("V.p") != std::string::npos);
    }

    // uniform-multiplier model demands an exponential interarrival law
    std::string bad_a = R"({
      "model": "III",
      "V": {"kind": "uniform01"},
      "A": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
      "B": {"kind": "exponential", "rate": 1.0}
    })";
    CHECK_THROWS_AS(parse_config(bad_a), SchemaError);

    CHECK_THROWS_AS(parse_config("not json at all"), SchemaError);
    CHECK_THROWS_AS(parse_config(R"({"model": "I"})"), SchemaError);
}

TEST_CASE("unknown keys are rejected everywhere") {
    std::string extra_top = std::string(kExample1);
    extra_top.insert(extra_top.rfind('}'), R"(, "extra": 1)");
    CHECK_THROWS_AS(parse_config(extra_top), SchemaError);

    CHECK_THROWS_AS(parse_config(R"({
      "model": "I",
      "V": {"kind": "atoms", "atoms": [[-1.0, 1.0]], "typo": true},
      "A": {"kind": "exponential", "rate": 1.0},
      "B": {"kind": "exponential", "rate": 1.0}
    })"),
                    SchemaError);
}

TEST_CASE("epoch parameters must lie inside the unit interval") {
    for (const char* r : {"0.0", "1.0", "-0.3", "1.5"}) {
        std::string text = std::string(kExample1);
        auto pos = text.find("[0.5]");
        text.replace(pos, 5, "[" + std::string(r) + "]");
        CHECK_THROWS_AS(parse_config(text), SchemaError);
    }
}

TEST_CASE("canonical dump round-trips to the same config") {
    RunConfig cfg = parse_config(kExample1);
    RunConfig again = parse_config(cfg.canonical);
    CHECK(config_hash(cfg) == config_hash(again));
    CHECK(again.r_values == cfg.r_values);
    CHECK(again.s_grid == cfg.s_grid);
    CHECK(again.sim.seed == cfg.sim.seed);
}

TEST_CASE("transient run emits the known normalization value") {
    RunConfig cfg = parse_config(kExample1);
    std::ostringstream out;
    CHECK(run("transient", cfg, out) == 0);
    auto rows = csv_rows(out.str());
    REQUIRE(rows.size() == 3);  // one per s-grid point
    REQUIRE(rows[0].size() == 4);
    CHECK(std::stod(rows[0][0]) == doctest::Approx(0.5));
    CHECK(std::stod(rows[0][1]) == doctest::Approx(0.0));
    CHECK(std::stod(rows[0][2]) == doctest::Approx(2.0).epsilon(1e-10));  // Psi(r,0) = 1/(1-r)
    CHECK(std::stod(rows[0][3]) == doctest::Approx(0.0));
    for (const auto& row : rows)
        for (const auto& cell : row) CHECK(std::isfinite(std::stod(cell)));
}

TEST_CASE("every subcommand succeeds on the reference config") {
    RunConfig cfg = parse_config(kExample1);
    for (const char* sub : {"stability", "stationary", "transient", "moments", "simulate"}) {
        std::ostringstream out;
        CHECK(run(sub, cfg, out) == 0);
        CHECK(!out.str().empty());
    }
}

TEST_CASE("numeric failures surface as exit code 3") {
    RunConfig cfg = parse_config(R"({
      "model": "II",
      "V": {"kind": "mixed", "a": 1.5, "p": 0.3,
            "negative": {"kind": "atoms", "atoms": [[-1.0, 1.0]]}},
      "A": {"kind": "exponential", "rate": 1.0},
      "B": {"kind": "exponential", "rate": 1.0}
    })");
    std::ostringstream out;
    CHECK(run("transient", cfg, out) == 3);
    CHECK(out.str().find("\"error\"") != std::string::npos);
}

TEST_CASE("runs are byte-for-byte reproducible") {
    RunConfig cfg = parse_config(kExample1);
    for (const char* sub : {"transient", "stationary", "simulate"}) {
        std::ostringstream a, b;
        REQUIRE(run(sub, cfg, a) == 0);
        REQUIRE(run(sub, cfg, b) == 0);
        CHECK(a.str() == b.str());
    }
}
