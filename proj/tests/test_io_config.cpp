#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stirlab/config.hpp"
#include "stirlab/snapshot.hpp"

using namespace stirlab;

namespace {
std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("TSL1 round trip") {
    Grid g = Grid::make(2, 16);
    auto f = SpectralField::random_bandlimited(g, 5, 4, "density");
    const std::string path = temp_path("stirlab_test.tsl1");
    write_tsl1(path, f, 1.25);
    auto snap = read_tsl1(path);
    CHECK(snap.time == 1.25);
    CHECK(snap.field.label() == "density");
    CHECK(snap.field.grid() == g);
    CHECK(l2_norm(snap.field - f) < 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("TSL1 header layout") {
    Grid g = Grid::make(2, 16);
    SpectralField f(g, "ab");
    const std::string path = temp_path("stirlab_hdr.tsl1");
    write_tsl1(path, f, 0.0);
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "TSL1");
    std::uint32_t version;
    in.read(reinterpret_cast<char*>(&version), 4);
    CHECK(version == 1);
    std::uint8_t d;
    in.read(reinterpret_cast<char*>(&d), 1);
    CHECK(d == 2);
    std::uint64_t n;
    in.read(reinterpret_cast<char*>(&n), 8);
    CHECK(n == 16);
    double time;
    in.read(reinterpret_cast<char*>(&time), 8);
    std::uint16_t label_len;
    in.read(reinterpret_cast<char*>(&label_len), 2);
    CHECK(label_len == 2);
    in.seekg(0, std::ios::end);
    CHECK(static_cast<std::size_t>(in.tellg()) ==
          4 + 4 + 1 + 8 + 8 + 2 + 2 + g.points() * sizeof(double));
    std::remove(path.c_str());

    const std::string bad = temp_path("stirlab_bad.tsl1");
    std::ofstream(bad, std::ios::binary) << "NOPE";
    CHECK_THROWS_AS(read_tsl1(bad), std::runtime_error);
    std::remove(bad.c_str());
}

TEST_CASE("flow spec parsing") {
    auto u = flow_from_string("cellular2d:A=3,nu=2,sign=-1");
    CHECK(u.family() == "cellular2d");
    CHECK(u.cells() == 2);
    CHECK(u.amplitude() == doctest::Approx(6.0));
    CHECK(u.sign() == -1);

    auto z = flow_from_string("zero");
    CHECK(z.is_zero());

    auto s = flow_from_string("shear2d:A=4");
    CHECK(s.sup_norm() == doctest::Approx(4.0));

    CHECK_THROWS_AS(flow_from_string("vortex:A=1"), SchemaError);
    CHECK_THROWS_AS(flow_from_string("cellular2d:B=1"), SchemaError);
}

TEST_CASE("config validation rejects unknown keys and bad types") {
    json good = {
        {"experiment", "tau-vs-nu"},
        {"nu_list", {1, 2}},
        {"n", 32},
    };
    CHECK_NOTHROW(validate_config(good));

    json unknown = good;
    unknown["bogus"] = 1;
    CHECK_THROWS_AS(validate_config(unknown), SchemaError);

    json badtype = good;
    badtype["n"] = "big";
    CHECK_THROWS_AS(validate_config(badtype), SchemaError);

    json missing = {{"experiment", "tau-vs-nu"}};
    CHECK_THROWS_AS(validate_config(missing), SchemaError);

    json unknown_exp = {{"experiment", "frobnicate"}};
    CHECK_THROWS_AS(validate_config(unknown_exp), SchemaError);

    json ks = {
        {"experiment", "ks-suppression"},
        {"chi", 1.0},
        {"n", 64},
        {"T", 0.5},
        {"bump", {{"mass", 30.0}, {"width", 0.1}}},
        {"flow", {{"family", "cellular2d"}, {"A", 8.0}, {"nu", 8}, {"sign", -1}}},
    };
    CHECK_NOTHROW(validate_config(ks));
    ks["bump"]["flavor"] = "salty";
    CHECK_THROWS_AS(validate_config(ks), SchemaError);
}

TEST_CASE("config hash is canonical and value-sensitive") {
    json a = {{"experiment", "occupancy"}, {"mu", 2}};
    json b = {{"mu", 2}, {"experiment", "occupancy"}};  // same content, different order
    CHECK(config_hash(a) == config_hash(b));
    json c = a;
    c["mu"] = 3;
    CHECK(config_hash(a) != config_hash(c));
}
