#include "nlsh/snapshot.hpp"

#include "nlsh/error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace nlsh {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'H', '2', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put_le(std::ostream& out, U value) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t k = 0; k < sizeof(U); ++k) {
        bytes[k] = static_cast<char>((value >> (8 * k)) & 0xFFu);
    }
    out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw Error("SH2D: truncated stream");
    U value = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) value |= static_cast<U>(bytes[k]) << (8 * k);
    return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_snapshot(std::ostream& out, const Field& field, double time) {
    const Grid& g = field.grid();
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
    put_f64(out, g.lx());
    put_f64(out, g.ly());
    put_le<std::uint8_t>(out, g.bc() == Boundary::Periodic ? 0 : 1);
    put_f64(out, time);
    for (double v : field.values()) put_f64(out, v);
    if (!out) throw Error("SH2D: write failed");
}

Snapshot read_snapshot(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw Error("SH2D: bad magic");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kVersion) throw Error("SH2D: unsupported version " + std::to_string(version));
    const auto nx = get_le<std::uint32_t>(in);
    const auto ny = get_le<std::uint32_t>(in);
    const double lx = get_f64(in);
    const double ly = get_f64(in);
    const auto bc = get_le<std::uint8_t>(in);
    if (bc > 1) throw Error("SH2D: bad boundary code " + std::to_string(bc));
    const double time = get_f64(in);
    const Grid grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly,
                    bc == 0 ? Boundary::Periodic : Boundary::Clamped);
    std::vector<double> values(grid.size());
    for (double& v : values) v = get_f64(in);
    return Snapshot{Field(grid, std::move(values)), time};
}

void save_snapshot(const std::filesystem::path& path, const Field& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("SH2D: cannot open " + path.string() + " for writing");
    write_snapshot(out, field, time);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("SH2D: cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace nlsh
