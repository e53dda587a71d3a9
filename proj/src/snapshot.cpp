#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nlmh/error.hpp"
#include "nlmh/io.hpp"

namespace nlmh {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <class T>
T get(const std::vector<std::uint8_t>& in, std::size_t offset) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'N', 'L', 'C', 'H'};
constexpr std::uint32_t kFieldCount = 3;

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const SimState& s) {
  const Grid& g = s.c.grid;
  std::vector<std::uint8_t> out;
  out.reserve(kSnapshotHeaderBytes + kFieldCount * g.size() * sizeof(double));
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<std::uint32_t>(out, kFieldCount);
  put<double>(out, s.t);
  put<std::uint64_t>(out, 0);
  for (const ScalarField* f : {&s.c, &s.v.x, &s.v.y})
    for (double v : f->values) put<double>(out, v);
  return out;
}

SimState decode_snapshot(const std::vector<std::uint8_t>& bytes, std::optional<int> expected_n) {
  if (bytes.size() < kSnapshotHeaderBytes)
    throw Error(ErrorCode::CorruptSnapshot, "snapshot shorter than its header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(ErrorCode::CorruptSnapshot, "bad snapshot magic");
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kSnapshotVersion)
    throw Error(ErrorCode::UnsupportedVersion, "snapshot version " + std::to_string(version));
  const auto n = get<std::uint32_t>(bytes, 8);
  const auto fields = get<std::uint32_t>(bytes, 12);
  if (fields != kFieldCount)
    throw Error(ErrorCode::CorruptSnapshot, "expected 3 fields, found " + std::to_string(fields));
  if (n < 8 || n > (1u << 15))
    throw Error(ErrorCode::CorruptSnapshot, "implausible grid size " + std::to_string(n));
  if (expected_n && static_cast<int>(n) != *expected_n)
    throw Error(ErrorCode::GridMismatch, "snapshot has N=" + std::to_string(n) +
                                             ", config expects N=" + std::to_string(*expected_n));
  const Grid g(static_cast<int>(n));
  const std::size_t need = kSnapshotHeaderBytes + fields * g.size() * sizeof(double);
  if (bytes.size() != need)
    throw Error(ErrorCode::CorruptSnapshot, "snapshot has " + std::to_string(bytes.size()) +
                                                " bytes, expected " + std::to_string(need));
  SimState s(g);
  s.t = get<double>(bytes, 16);
  std::size_t off = kSnapshotHeaderBytes;
  for (ScalarField* f : {&s.c, &s.v.x, &s.v.y})
    for (double& v : f->values) {
      v = get<double>(bytes, off);
      off += sizeof(double);
    }
  s.v.divergence_free = true;
  return s;
}

void write_snapshot(const SimState& s, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_snapshot(s);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

SimState read_snapshot(const std::filesystem::path& path, std::optional<int> expected_n) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes, expected_n);
}

}  // namespace nlmh
