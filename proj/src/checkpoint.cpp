#include "kplab/io.hpp"

#include "kplab/errors.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace kplab {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
bool get(std::istream& in, T& v) {
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) return false;
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
    return true;
}

} // namespace

void write_checkpoint(std::ostream& out, const Field& f, double t) {
    const Grid& g = f.grid();
    put<std::int64_t>(out, g.nx());
    put<std::int64_t>(out, g.ny());
    put<double>(out, g.lx());
    put<double>(out, g.ly());
    put<double>(out, t);
    if constexpr (std::endian::native == std::endian::little) {
        const auto& v = f.values();
        out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
    } else {
        for (double v : f.values()) put<double>(out, v);
    }
}

bool read_checkpoint(std::istream& in, Checkpoint& cp) {
    std::int64_t nx, ny;
    if (!get(in, nx)) return false;
    double lx, ly, t;
    if (!get(in, ny) || !get(in, lx) || !get(in, ly) || !get(in, t)) throw Error("truncated checkpoint header");
    if (nx <= 0 || ny <= 0 || nx > (1 << 16) || ny > (1 << 16)) throw Error("checkpoint header has bad sizes");
    const Grid g(int(nx), int(ny), lx, ly);
    std::vector<double> v(g.size());
    for (auto& x : v)
        if (!get(in, x)) throw Error("truncated checkpoint data");
    cp.field = Field::from_values(g, std::move(v));
    cp.t = t;
    return true;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ostringstream suffix;
    suffix << ".tmp." << ::getpid() << "." << std::this_thread::get_id();
    const fs::path tmp = target.string() + suffix.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
}

void save_checkpoint(const std::string& path, const Field& f, double t) {
    std::ostringstream out(std::ios::binary);
    write_checkpoint(out, f, t);
    atomic_write(path, out.str());
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint " + path);
    Checkpoint cp;
    if (!read_checkpoint(in, cp)) throw Error("empty checkpoint " + path);
    return cp;
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
    std::ostringstream out(std::ios::binary);
    for (std::size_t i = 0; i < traj.times.size(); ++i) write_checkpoint(out, traj.fields[i], traj.times[i]);
    atomic_write(path, out.str());
}

Trajectory load_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open trajectory " + path);
    Trajectory traj;
    Checkpoint cp;
    while (read_checkpoint(in, cp)) {
        if (traj.fields.empty()) {
            traj.grid = cp.field.grid();
            traj.config.grid = traj.grid;
        } else if (!(cp.field.grid() == traj.grid)) {
            throw Error("trajectory records on different grids");
        } else if (!(cp.t > traj.times.back())) {
            throw Error("trajectory times must increase");
        }
        traj.times.push_back(cp.t);
        traj.l2.push_back(l2_norm(cp.field));
        traj.fields.push_back(std::move(cp.field));
    }
    if (traj.fields.empty()) throw Error("empty trajectory " + path);
    return traj;
}

} // namespace kplab
