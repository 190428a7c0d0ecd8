#include "hpl/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "hpl/errors.hpp"

namespace hpl {

namespace {

constexpr char kMagic[6] = {'H', 'P', 'F', 'L', 'D', '1'};

void put_u32(std::ostream& os, uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    os.write(b, 4);
}

void put_f64(std::ostream& os, double v) {
    char b[8];
    std::memcpy(b, &v, 8);
    os.write(b, 8);
}

uint32_t get_u32(std::istream& is) {
    char b[4];
    is.read(b, 4);
    uint32_t v;
    std::memcpy(&v, b, 4);
    return v;
}

double get_f64(std::istream& is) {
    char b[8];
    is.read(b, 8);
    double v;
    std::memcpy(&v, b, 8);
    return v;
}

void write_block(std::ostream& os, const Field& f) {
    const Grid& g = f.grid();
    os.write(kMagic, sizeof(kMagic));
    put_u32(os, static_cast<uint32_t>(g.nx()));
    put_u32(os, static_cast<uint32_t>(g.ny()));
    put_f64(os, g.height());
    put_f64(os, g.lx());
    put_f64(os, g.ell());
    os.write(reinterpret_cast<const char*>(f.data().data()),
             static_cast<std::streamsize>(f.data().size() * sizeof(double)));
}

Field read_block(std::istream& is, const std::string& path) {
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, kMagic, 6) != 0)
        throw ConfigError("snapshot: bad magic in " + path);
    const int nx = static_cast<int>(get_u32(is));
    const int ny = static_cast<int>(get_u32(is));
    const double y_height = get_f64(is);
    const double lx = get_f64(is);
    const double ell = get_f64(is);
    Field f(Grid::create(nx, ny, y_height, lx, ell));
    is.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    if (!is) throw ConfigError("snapshot: truncated file " + path);
    return f;
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("snapshot: cannot open " + path + " for write");
    write_block(os, f);
    if (!os) throw ConfigError("snapshot: write failed for " + path);
}

Field read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("snapshot: cannot open " + path);
    return read_block(is, path);
}

void write_checkpoint(const std::string& path, const Field& u, const Field& ut,
                      double t) {
    if (!u.grid().same_shape(ut.grid()))
        throw ShapeError("checkpoint: u and ut on different grids");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("snapshot: cannot open " + path + " for write");
    write_block(os, u);
    write_block(os, ut);
    put_f64(os, t);
    if (!os) throw ConfigError("snapshot: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("snapshot: cannot open " + path);
    Checkpoint cp;
    cp.u = read_block(is, path);
    cp.ut = read_block(is, path);
    cp.t = get_f64(is);
    if (!is) throw ConfigError("snapshot: truncated checkpoint " + path);
    return cp;
}

}  // namespace hpl
