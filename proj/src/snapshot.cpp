#include "stirlab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace stirlab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "TSL1 writer assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void write_tsl1(const std::string& path, const SpectralField& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_tsl1: cannot open " + path);
    out.write("TSL1", 4);
    put<std::uint32_t>(out, 1);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(field.grid().dim));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(field.grid().n));
    put<double>(out, time);
    const std::string& label = field.label();
    if (label.size() > 0xffff) throw std::runtime_error("write_tsl1: label too long");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(label.size()));
    out.write(label.data(), static_cast<std::streamsize>(label.size()));
    auto phys = field.to_physical();
    out.write(reinterpret_cast<const char*>(phys.data()),
              static_cast<std::streamsize>(phys.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_tsl1: write failed for " + path);
}

Tsl1Snapshot read_tsl1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_tsl1: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "TSL1", 4) != 0)
        throw std::runtime_error("read_tsl1: bad magic in " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != 1) throw std::runtime_error("read_tsl1: unsupported version");
    const int d = get<std::uint8_t>(in);
    const auto n = static_cast<int>(get<std::uint64_t>(in));
    const double time = get<double>(in);
    const auto label_len = get<std::uint16_t>(in);
    std::string label(label_len, '\0');
    in.read(label.data(), label_len);
    Grid g = Grid::make(d, n);
    std::vector<double> phys(g.points());
    in.read(reinterpret_cast<char*>(phys.data()),
            static_cast<std::streamsize>(phys.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_tsl1: truncated file " + path);
    Tsl1Snapshot snap;
    snap.field = SpectralField::from_physical(g, phys, label);
    snap.time = time;
    return snap;
}

}  // namespace stirlab
