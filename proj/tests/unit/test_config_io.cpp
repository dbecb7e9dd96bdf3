#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "compacton/config.hpp"
#include "compacton/error.hpp"
#include "compacton/field_io.hpp"
#include "support.hpp"

using namespace compacton;
using nlohmann::json;

TEST_SUITE("config_io") {
  TEST_CASE("defaults validate and nested and flat documents agree") {
    Config c;
    c.validate();
    const Config nested = Config::from_json({{"grid", {{"nr", 96}}}, {"exponents", {{"q", 0.15}}}});
    const Config flat = Config::from_json({{"grid.nr", 96}, {"exponents.q", 0.15}});
    CHECK(nested.doc() == flat.doc());
    CHECK(nested.content_hash() == flat.content_hash());
    CHECK(nested.nr() == 96);
    CHECK(nested.content_hash() != c.content_hash());
    CHECK(c.content_hash().size() == 16);
    CHECK(Config::from_json(c.doc()).content_hash() == c.content_hash());
  }

  TEST_CASE("overrides are typed and checked") {
    Config c;
    c.set("grid.nz", std::string("32"));
    CHECK(c.nz() == 32);
    c.set("scan.lambda_list", std::string("[2.0, 2.1]"));
    CHECK(c.lambda_list() == std::vector<double>{2.0, 2.1});
    c.set("solver.seeds", std::string("[\"bump\"]"));
    CHECK(c.seed_names() == std::vector<std::string>{"bump"});
    CHECK_THROWS_AS(c.set("grid.bogus", std::string("1")), InvalidArgument);
    CHECK_THROWS_AS(c.set("grid.nz", std::string("\"many\"")), InvalidArgument);
    c.set("solver.tol_P", std::string("-1"));
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    Config d;
    d.set("exponents.p", std::string("0.05"));
    CHECK_THROWS_AS(d.validate(), InvalidArgument);
    Config s;
    s.set("solver.seeds", std::string("[\"ring\"]"));
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
  }

  TEST_CASE("file tag and hash primitive") {
    Config c;
    CHECK(c.file_tag() == "q0.1_p0.2_N4_T1_nz64_nr64");
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  }

  TEST_CASE("fields round-trip bit-exactly") {
    const Exponents e = Exponents::make(0.1, 0.2, 4);
    const GridPtr g = build_grid(Geometry::make(1.25, 0.8, 4), 8, 10);
    std::mt19937_64 rng(31);
    Field u = testing::random_smooth(g, rng);
    u(2, 3) = 1.0 / 3.0;
    u(5, 1) = 1e-300;
    const auto path = std::filesystem::temp_directory_path() / "compacton_roundtrip.json";
    write_field(path, u, e, {{"lambda", 2.0}});
    const LoadedField back = read_field(path);
    std::filesystem::remove(path);
    CHECK(back.exponents.q == e.q);
    CHECK(back.exponents.N == e.N);
    CHECK(back.field.grid().T() == 1.25);
    CHECK(back.field.grid().nr() == 10);
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(back.field.values()[k] == u.values()[k]);

    json bad = field_to_json(u, e);
    bad["values"].erase(0);
    CHECK_THROWS_AS(field_from_json(bad), InvalidArgument);
  }
}
