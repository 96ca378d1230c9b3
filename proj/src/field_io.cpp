#include "klab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "klab/errors.hpp"

namespace klab {
namespace {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts are unsupported");

void write_sidecar(const LatticePtr& lat, const std::string& dir, const std::string& name,
                   const char* kind) {
    nlohmann::json j;
    j["dim_c"] = lat->dim_c();
    j["periods"] = lat->periods();
    j["resolution"] = lat->resolutions();
    j["field_name"] = name;
    j["kind"] = kind;
    std::ofstream out(std::filesystem::path(dir) / (name + ".json"));
    out << j.dump(2) << "\n";
}

std::pair<LatticePtr, nlohmann::json> read_sidecar(const std::string& dir,
                                                   const std::string& name) {
    std::ifstream in(std::filesystem::path(dir) / (name + ".json"));
    if (!in) throw ConfigError("missing field sidecar for " + name);
    nlohmann::json j;
    in >> j;
    auto lat = Lattice::make(j.at("dim_c").get<int>(),
                             j.at("periods").get<std::vector<double>>(),
                             j.at("resolution").get<std::vector<int>>());
    return {lat, j};
}

void write_raw(const void* data, std::size_t bytes, const std::string& dir,
               const std::string& name) {
    std::ofstream out(std::filesystem::path(dir) / (name + ".f64"), std::ios::binary);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
    if (!out) throw ConfigError("failed writing field dump " + name);
}

std::vector<char> read_raw(const std::string& dir, const std::string& name,
                           std::size_t expected_bytes) {
    std::ifstream in(std::filesystem::path(dir) / (name + ".f64"), std::ios::binary);
    if (!in) throw ConfigError("missing field dump " + name);
    std::vector<char> buf(expected_bytes);
    in.read(buf.data(), static_cast<std::streamsize>(expected_bytes));
    if (in.gcount() != static_cast<std::streamsize>(expected_bytes))
        throw ConfigError("truncated field dump " + name);
    return buf;
}

}  // namespace

void dump_field(const RealField& f, const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    write_sidecar(f.lat, dir, name, "real");
    write_raw(f.v.data(), f.size() * sizeof(double), dir, name);
}

void dump_field(const ComplexField& f, const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    write_sidecar(f.lat, dir, name, "complex");
    write_raw(f.v.data(), f.size() * 2 * sizeof(double), dir, name);
}

RealField load_real_field(const std::string& dir, const std::string& name) {
    auto [lat, j] = read_sidecar(dir, name);
    if (j.at("kind") != "real") throw ConfigError(name + " is not a real field dump");
    RealField f(lat);
    auto buf = read_raw(dir, name, f.size() * sizeof(double));
    std::memcpy(f.v.data(), buf.data(), buf.size());
    return f;
}

ComplexField load_complex_field(const std::string& dir, const std::string& name) {
    auto [lat, j] = read_sidecar(dir, name);
    if (j.at("kind") != "complex") throw ConfigError(name + " is not a complex field dump");
    ComplexField f(lat);
    auto buf = read_raw(dir, name, f.size() * 2 * sizeof(double));
    std::memcpy(f.v.data(), buf.data(), buf.size());
    return f;
}

}  // namespace klab
