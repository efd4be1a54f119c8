#include "paleyscope/plsf.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "paleyscope/report.hpp"

namespace paleyscope {
namespace {

static_assert(std::endian::native == std::endian::little,
              "PLSF I/O assumes a little-endian host");

template <class T>
void put(std::string& buf, T value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  buf.append(raw, sizeof(T));
}

template <class T>
T take(const std::string& buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, sizeof(T));
  return value;
}

}  // namespace

void write_plsf(const std::filesystem::path& path, const Field& f) {
  if (f.values.size() != f.grid.size() * f.channels) {
    throw std::invalid_argument("write_plsf: inconsistent field");
  }
  std::string buf;
  buf.reserve(32 + 8 * f.values.size());
  buf.append("PLSF", 4);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.d));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.n));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.channels));
  put<double>(buf, f.grid.L);
  buf.append(8, '\0');
  for (const Complex& v : f.values) {
    put<float>(buf, static_cast<float>(v.real()));
    put<float>(buf, static_cast<float>(v.imag()));
  }
  write_file_atomic(path, buf);
}

Field read_plsf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_plsf: cannot open " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 32 || buf.compare(0, 4, "PLSF") != 0) {
    throw std::runtime_error("read_plsf: bad header in " + path.string());
  }
  const SpaceGrid grid(static_cast<int>(take<std::uint32_t>(buf, 4)),
                       static_cast<int>(take<std::uint32_t>(buf, 8)), take<double>(buf, 16));
  const int channels = static_cast<int>(take<std::uint32_t>(buf, 12));
  Field f = Field::zeros(grid, channels);
  if (buf.size() != 32 + 8 * f.values.size()) {
    throw std::runtime_error("read_plsf: truncated payload in " + path.string());
  }
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] = {take<float>(buf, 32 + 8 * i), take<float>(buf, 36 + 8 * i)};
  }
  return f;
}

}  // namespace paleyscope
