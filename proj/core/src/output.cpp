#include "hpl/output.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hpl/errors.hpp"

namespace hpl {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream os;
    size_t n_columns = 0;
    std::string path;
};

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->os.open(path, std::ios::binary);  // '\n' endings everywhere
    impl_->path = path;
    impl_->n_columns = columns.size();
    if (!impl_->os) throw ConfigError("csv: cannot open " + path);
    for (size_t q = 0; q < columns.size(); ++q)
        impl_->os << (q ? "," : "") << columns[q];
    impl_->os << "\n";
}

CsvWriter::~CsvWriter() {
    close();
    delete impl_;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != impl_->n_columns)
        throw ShapeError("csv: row width mismatch in " + impl_->path);
    for (size_t q = 0; q < values.size(); ++q)
        impl_->os << (q ? "," : "") << format_double(values[q]);
    impl_->os << "\n";
}

void CsvWriter::close() {
    if (impl_->os.is_open()) impl_->os.close();
}

std::string fnv1a_hex(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path + " for write");
    os << text;
    if (!os) throw ConfigError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

}  // namespace hpl
