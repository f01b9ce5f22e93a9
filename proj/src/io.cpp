#include "lrp/io.hpp"

#include <algorithm>
#include <bit>
#include <boost/crc.hpp>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "lrp/error.hpp"

namespace lrp {

using Crc64 = boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true>;

std::uint64_t crc64(std::span<const std::uint8_t> bytes) {
  Crc64 crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string crc64_hex(std::span<const std::uint8_t> bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << crc64(bytes);
  return os.str();
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return crc64_hex(data);
}

namespace {

constexpr char kMagic[4] = {'L', 'R', 'P', 'G'};

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  // little-endian on disk
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) fail(ErrorKind::format, "truncated environment file");
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_environment(const Environment& env) {
  const auto& p = env.params;
  const auto edges = env.graph.edges();
  std::vector<std::uint8_t> out;
  out.reserve(64 + 16 * edges.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint16_t>(out, kFormatVersion);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(p.d));
  put<double>(out, p.s);
  put<double>(out, p.q);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(p.norm));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(p.n));
  put<std::uint8_t>(out, p.long_range_enabled ? 1 : 0);
  put<std::uint64_t>(out, p.seed);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(env.graph.vertex_count()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(edges.size()));
  for (const auto& [u, v] : edges) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(u));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(v));
  }
  put<std::uint64_t>(out, crc64(out));
  return out;
}

Environment decode_environment(std::span<const std::uint8_t> bytes, std::optional<int> expected_d) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorKind::format, "bad magic: not an environment file");
  Reader in(bytes.subspan(4));
  const auto version = in.get<std::uint16_t>();
  if (version != kFormatVersion)
    fail(ErrorKind::format, "version mismatch: file has " + std::to_string(version) + ", expected " +
                                std::to_string(kFormatVersion));
  LrpParams p;
  p.d = in.get<std::uint16_t>();
  p.s = in.get<double>();
  p.q = in.get<double>();
  const auto norm = in.get<std::uint8_t>();
  if (norm > 1) fail(ErrorKind::format, "unknown norm tag");
  p.norm = static_cast<Norm>(norm);
  p.n = static_cast<std::int64_t>(in.get<std::uint64_t>());
  p.long_range_enabled = in.get<std::uint8_t>() != 0;
  p.seed = in.get<std::uint64_t>();
  const auto vertex_count = in.get<std::uint64_t>();
  const auto edge_count = in.get<std::uint64_t>();
  const std::size_t header_end = 4 + in.pos();
  if (edge_count > (bytes.size() - std::min(bytes.size(), header_end)) / 16)
    fail(ErrorKind::format, "truncated environment file");
  if (bytes.size() != header_end + 16 * edge_count + 8)
    fail(ErrorKind::format, bytes.size() < header_end + 16 * edge_count + 8 ? "truncated environment file"
                                                                           : "trailing bytes after checksum");
  const std::size_t body = header_end + 16 * edge_count;
  Reader tail(bytes.subspan(body));
  if (tail.get<std::uint64_t>() != crc64(bytes.subspan(0, body)))
    fail(ErrorKind::format, "checksum failure");
  if (expected_d && *expected_d != p.d)
    fail(ErrorKind::format, "dimension mismatch: file has d=" + std::to_string(p.d) + ", expected d=" +
                                std::to_string(*expected_d));
  Environment env;
  env.params = p;
  env.box = Box(p.d, p.n);
  if (static_cast<std::uint64_t>(env.box.size()) != vertex_count)
    fail(ErrorKind::format, "vertex count does not match box");
  std::vector<Edge> edges(edge_count);
  for (auto& e : edges) {
    e.first = static_cast<Vertex>(in.get<std::uint64_t>());
    e.second = static_cast<Vertex>(in.get<std::uint64_t>());
  }
  env.graph = Graph::from_edges(static_cast<Vertex>(vertex_count), edges);
  return env;
}

void save_environment(const Environment& env, const std::string& path) {
  const auto bytes = encode_environment(env);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, "write failed for " + path);
}

Environment load_environment(const std::string& path, std::optional<int> expected_d) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_environment(bytes, expected_d);
}

}  // namespace lrp
