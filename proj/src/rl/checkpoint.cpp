#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "usvauv/errors.hpp"
#include "usvauv/rl/checkpoint.hpp"

namespace usvauv::rl {
namespace {

constexpr std::array<char, 8> kMagic{'U', 'S', 'V', 'A', 'U', 'V', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes little-endian");

std::uint64_t fnv1a(const std::vector<char>& buf, std::size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ULL;
  return h;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf.insert(buf.end(), p, p + sizeof v);
  }
  std::vector<char> buf;
};

class Reader {
 public:
  Reader(const std::vector<char>& b, std::size_t end) : buf_(b), end_(end) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > end_) throw CheckpointError("checkpoint truncated");
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::vector<char>& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

struct Parsed {
  CheckpointHeader header;
  std::vector<std::vector<int>> widths;
  std::vector<std::vector<double>> params;
};

Parsed parse(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kMagic.size() + sizeof(std::uint64_t))
    throw CheckpointError("checkpoint truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
    throw CheckpointError("not a checkpoint file: " + path.string());
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof stored);
  if (stored != fnv1a(buf, body)) throw CheckpointError("checkpoint checksum mismatch (truncated or corrupt)");

  Reader r(buf, body);
  for (std::size_t i = 0; i < kMagic.size(); ++i) r.get<char>();
  if (r.get<std::uint32_t>() != kVersion) throw CheckpointError("unsupported checkpoint version");
  Parsed p;
  p.header.state_dim = r.get<std::int32_t>();
  p.header.action_dim = r.get<std::int32_t>();
  p.header.seed = r.get<std::uint64_t>();
  p.header.hyper_hash = r.get<std::uint64_t>();
  const auto n_nets = r.get<std::uint32_t>();
  if (n_nets != 6) throw CheckpointError("checkpoint must hold 6 networks");
  for (std::uint32_t k = 0; k < n_nets; ++k) {
    const auto n_w = r.get<std::uint32_t>();
    if (n_w < 2 || n_w > 64) throw CheckpointError("bad layer count in checkpoint");
    std::vector<int> w;
    for (std::uint32_t i = 0; i < n_w; ++i) w.push_back(r.get<std::int32_t>());
    const auto n = r.get<std::uint64_t>();
    if (n > (body - r.pos()) / sizeof(double)) throw CheckpointError("checkpoint truncated");
    std::vector<double> params(n);
    for (auto& v : params) v = r.get<double>();
    p.widths.push_back(std::move(w));
    p.params.push_back(std::move(params));
  }
  if (r.pos() != body) throw CheckpointError("trailing bytes in checkpoint");
  return p;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Td3Agent& agent) {
  Writer w;
  for (char c : kMagic) w.put(c);
  w.put(kVersion);
  w.put(static_cast<std::int32_t>(agent.state_dim()));
  w.put(static_cast<std::int32_t>(agent.action_dim()));
  w.put(agent.seed());
  w.put(agent.hyper().hash());
  w.put(static_cast<std::uint32_t>(agent.networks().size()));
  for (const Mlp& net : agent.networks()) {
    w.put(static_cast<std::uint32_t>(net.widths().size()));
    for (int x : net.widths()) w.put(static_cast<std::int32_t>(x));
    w.put(static_cast<std::uint64_t>(net.n_params()));
    for (double v : net.params()) w.put(v);
  }
  w.put(fnv1a(w.buf, w.buf.size()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) { return parse(path).header; }

CheckpointHeader load_checkpoint(const std::filesystem::path& path, Td3Agent& agent) {
  Parsed p = parse(path);
  if (p.header.state_dim != agent.state_dim() || p.header.action_dim != agent.action_dim())
    throw CheckpointError("checkpoint widths (state " + std::to_string(p.header.state_dim) +
                          ", action " + std::to_string(p.header.action_dim) +
                          ") do not match the environment (state " +
                          std::to_string(agent.state_dim()) + ", action " +
                          std::to_string(agent.action_dim()) + ")");
  auto& nets = agent.networks();
  for (std::size_t k = 0; k < nets.size(); ++k)
    if (p.widths[k] != nets[k].widths() || p.params[k].size() != nets[k].n_params())
      throw CheckpointError("checkpoint network " + std::to_string(k) + " layer widths differ");
  for (std::size_t k = 0; k < nets.size(); ++k)
    std::copy(p.params[k].begin(), p.params[k].end(), nets[k].params().begin());
  return p.header;
}

}  // namespace usvauv::rl
