#include "kplab/datagen.hpp"
#include "kplab/errors.hpp"
#include "kplab/io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kplab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "kplab_test_io";
    fs::create_directories(d);
    return d / name;
}

} // namespace

TEST_CASE("checkpoint record layout") {
    const Grid g(8, 8, 8, 3);
    std::vector<double> v(64);
    for (int i = 0; i < 64; ++i) v[i] = i + 0.5;
    const Field f = Field::from_values(g, v);
    std::ostringstream o;
    write_checkpoint(o, f, 0.75);
    const std::string s = o.str();
    REQUIRE(s.size() == 2 * 8 + 3 * 8 + 64 * 8);
    std::int64_t nx, ny;
    double lx, t, v5;
    std::memcpy(&nx, s.data(), 8);
    std::memcpy(&ny, s.data() + 8, 8);
    std::memcpy(&lx, s.data() + 16, 8);
    std::memcpy(&t, s.data() + 32, 8);
    std::memcpy(&v5, s.data() + 40 + 21 * 8, 8);
    CHECK(nx == 8);
    CHECK(ny == 8);
    CHECK(lx == 8.0);
    CHECK(t == 0.75);
    CHECK(v5 == f.at(2, 5));
}

TEST_CASE("checkpoint round trip is bit exact") {
    const Grid g(64, 32, 16, 12);
    const Field f = test::random_modes(g, 20, 10, 3);
    const auto p = scratch("cp.bin").string();
    save_checkpoint(p, f, 1.25);
    const Checkpoint c = load_checkpoint(p);
    CHECK(c.t == 1.25);
    CHECK(c.field.grid() == g);
    CHECK(c.field.values() == f.values());
}

TEST_CASE("truncated and missing files are errors") {
    const Grid g(8, 8, 4, 4);
    std::ostringstream o;
    write_checkpoint(o, Field(g), 0);
    std::istringstream cut(o.str().substr(0, o.str().size() - 3));
    Checkpoint c;
    CHECK_THROWS(read_checkpoint(cut, c));
    std::istringstream empty("");
    CHECK_FALSE(read_checkpoint(empty, c));
    CHECK_THROWS(load_checkpoint(scratch("missing.bin").string()));
}

TEST_CASE("trajectory round trip") {
    SolverConfig cfg;
    cfg.grid = Grid(32, 32, 16, 16);
    cfg.dt = 0.01;
    cfg.t_end = 0.05;
    PacketParams pp;
    EvolveOptions o;
    o.sample_count = 6;
    const Trajectory tr = evolve(smooth_packet(cfg.grid, pp), cfg, o);
    const auto p = scratch("traj.bin").string();
    save_trajectory(p, tr);
    const Trajectory back = load_trajectory(p);
    REQUIRE(back.times.size() == tr.times.size());
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(back.times[i] == tr.times[i]);
        CHECK(back.fields[i].values() == tr.fields[i].values());
    }
    CHECK(back.config.grid == cfg.grid);
}

TEST_CASE("atomic write replaces the file and leaves no temporaries") {
    const fs::path p = scratch("atomic") / "out.txt";
    fs::remove_all(p.parent_path());
    fs::create_directories(p.parent_path());
    atomic_write(p.string(), "first");
    atomic_write(p.string(), "second");
    std::ifstream in(p);
    std::string s((std::istreambuf_iterator<char>(in)), {});
    CHECK(s == "second");
    CHECK(std::distance(fs::directory_iterator(p.parent_path()), fs::directory_iterator()) == 1);
}
