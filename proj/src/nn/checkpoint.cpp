#include "flightrl/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace flightrl::nn {
namespace {

// This code assumes a little-endian host (checked at startup of the tools);
// serialization is raw byte copies of fixed-width types.

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& buf) : buf_(buf) {}
  template <class T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    put_bytes(s.data(), s.size());
  }

 private:
  std::vector<std::uint8_t>& buf_;
};

class Reader {
 public:
  Reader(const std::uint8_t* p, std::size_t n) : p_(p), end_(p + n) {}
  template <class T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    T v;
    std::memcpy(&v, p_, sizeof(T));
    p_ += sizeof(T);
    return v;
  }
  void get_bytes(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, p_, n);
    p_ += n;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(p_), n);
    p_ += n;
    return s;
  }
  bool done() const { return p_ == end_; }

 private:
  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end_ - p_) < n)
      throw CheckpointError("checkpoint payload truncated");
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

void write_shape(Writer& w, const std::vector<LayerSpec>& spec) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(spec.size()));
  for (const auto& s : spec) {
    w.put<std::int32_t>(s.in);
    w.put<std::int32_t>(s.out);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.kind));
  }
}

std::vector<LayerSpec> read_shape(Reader& r) {
  const auto n = r.get<std::uint32_t>();
  std::vector<LayerSpec> spec(n);
  for (auto& s : spec) {
    s.in = r.get<std::int32_t>();
    s.out = r.get<std::int32_t>();
    const auto k = r.get<std::uint8_t>();
    if (k > 1) throw CheckpointError("checkpoint: unknown layer kind");
    s.kind = static_cast<LayerKind>(k);
  }
  validate_spec(spec);
  return spec;
}

void write_blocks(Writer& w, const std::vector<LayerParams>& layers) {
  for (const auto& l : layers)
    for (const auto& view : block_views(l))
      w.put_bytes(view.data(), sizeof(double) * static_cast<std::size_t>(view.size()));
}

void read_blocks(Reader& r, std::vector<LayerParams>& layers) {
  for (auto& l : layers)
    for (auto& view : block_views(l))
      r.get_bytes(view.data(), sizeof(double) * static_cast<std::size_t>(view.size()));
}

}  // namespace

void Checkpoint::put_network(const std::string& name, const NetworkParams& p) {
  Section s;
  s.type = SectionType::network;
  Writer w(s.payload);
  write_shape(w, p.spec);
  write_blocks(w, p.layers);
  sections_[name] = std::move(s);
}

void Checkpoint::put_adam(const std::string& name, const AdamState& st) {
  // Shapes are recovered from the m blocks; W carries (out x in), the rest
  // are vectors whose presence encodes the layer kind.
  Section s;
  s.type = SectionType::adam;
  Writer w(s.payload);
  std::vector<LayerSpec> spec(st.m.size());
  for (std::size_t i = 0; i < st.m.size(); ++i) {
    spec[i].in = static_cast<int>(st.m[i].W.cols());
    spec[i].out = static_cast<int>(st.m[i].W.rows());
    spec[i].kind = st.m[i].gain.size() > 0 ? LayerKind::hidden : LayerKind::linear;
  }
  w.put<std::int64_t>(st.step);
  write_shape(w, spec);
  write_blocks(w, st.m);
  write_blocks(w, st.v);
  sections_[name] = std::move(s);
}

void Checkpoint::put_scalar(const std::string& name, double v) {
  Section s;
  s.type = SectionType::scalar;
  Writer w(s.payload);
  w.put<double>(v);
  sections_[name] = std::move(s);
}

void Checkpoint::put_counter(const std::string& name, std::int64_t v) {
  Section s;
  s.type = SectionType::counter;
  Writer w(s.payload);
  w.put<std::int64_t>(v);
  sections_[name] = std::move(s);
}

void Checkpoint::put_text(const std::string& name, const std::string& v) {
  Section s;
  s.type = SectionType::text;
  Writer w(s.payload);
  w.put_string(v);
  sections_[name] = std::move(s);
}

void Checkpoint::put_scalar_adam(const std::string& name, const ScalarAdam& st) {
  Section s;
  s.type = SectionType::scalar_adam;
  Writer w(s.payload);
  w.put<double>(st.m);
  w.put<double>(st.v);
  w.put<std::int64_t>(st.step);
  sections_[name] = std::move(s);
}

const Section& Checkpoint::section(const std::string& name, SectionType expect) const {
  auto it = sections_.find(name);
  if (it == sections_.end())
    throw CheckpointError("checkpoint: missing section '" + name + "'");
  if (it->second.type != expect)
    throw CheckpointError("checkpoint: section '" + name + "' has unexpected type");
  return it->second;
}

NetworkParams Checkpoint::get_network(const std::string& name) const {
  const auto& s = section(name, SectionType::network);
  Reader r(s.payload.data(), s.payload.size());
  NetworkParams p;
  p.spec = read_shape(r);
  p.layers.resize(p.spec.size());
  for (std::size_t i = 0; i < p.spec.size(); ++i) {
    const auto& sp = p.spec[i];
    auto& l = p.layers[i];
    l.W.resize(sp.out, sp.in);
    l.b.resize(sp.out);
    if (sp.kind == LayerKind::hidden) {
      l.gain.resize(sp.out);
      l.offset.resize(sp.out);
    }
  }
  read_blocks(r, p.layers);
  if (!r.done()) throw CheckpointError("checkpoint: trailing bytes in network section");
  return p;
}

AdamState Checkpoint::get_adam(const std::string& name) const {
  const auto& s = section(name, SectionType::adam);
  Reader r(s.payload.data(), s.payload.size());
  AdamState st;
  st.step = r.get<std::int64_t>();
  const auto spec = read_shape(r);
  auto shape_layers = [&spec]() {
    std::vector<LayerParams> ls(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      ls[i].W.resize(spec[i].out, spec[i].in);
      ls[i].b.resize(spec[i].out);
      if (spec[i].kind == LayerKind::hidden) {
        ls[i].gain.resize(spec[i].out);
        ls[i].offset.resize(spec[i].out);
      }
    }
    return ls;
  };
  st.m = shape_layers();
  st.v = shape_layers();
  read_blocks(r, st.m);
  read_blocks(r, st.v);
  if (!r.done()) throw CheckpointError("checkpoint: trailing bytes in adam section");
  return st;
}

double Checkpoint::get_scalar(const std::string& name) const {
  const auto& s = section(name, SectionType::scalar);
  Reader r(s.payload.data(), s.payload.size());
  return r.get<double>();
}

std::int64_t Checkpoint::get_counter(const std::string& name) const {
  const auto& s = section(name, SectionType::counter);
  Reader r(s.payload.data(), s.payload.size());
  return r.get<std::int64_t>();
}

std::string Checkpoint::get_text(const std::string& name) const {
  const auto& s = section(name, SectionType::text);
  Reader r(s.payload.data(), s.payload.size());
  return r.get_string();
}

ScalarAdam Checkpoint::get_scalar_adam(const std::string& name) const {
  const auto& s = section(name, SectionType::scalar_adam);
  Reader r(s.payload.data(), s.payload.size());
  ScalarAdam st;
  st.m = r.get<double>();
  st.v = r.get<double>();
  st.step = r.get<std::int64_t>();
  return st;
}

void Checkpoint::write(std::ostream& os) const {
  std::vector<std::uint8_t> buf;
  Writer w(buf);
  w.put_bytes(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sections_.size()));
  for (const auto& [name, sec] : sections_) {
    w.put_string(name);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(sec.type));
    w.put<std::uint64_t>(sec.payload.size());
    w.put_bytes(sec.payload.data(), sec.payload.size());
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw CheckpointError("checkpoint: write failed");
}

Checkpoint Checkpoint::read(std::istream& is) {
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(is)),
                                std::istreambuf_iterator<char>());
  Reader r(buf.data(), buf.size());
  char magic[8];
  r.get_bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw CheckpointError("checkpoint: bad magic (not a checkpoint file)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError("checkpoint: unsupported version " + std::to_string(version));
  const auto count = r.get<std::uint32_t>();
  Checkpoint c;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.get_string();
    Section sec;
    const auto type = r.get<std::uint32_t>();
    if (type < 1 || type > 6)
      throw CheckpointError("checkpoint: unknown section type " + std::to_string(type));
    sec.type = static_cast<SectionType>(type);
    const auto len = r.get<std::uint64_t>();
    sec.payload.resize(len);
    r.get_bytes(sec.payload.data(), len);
    c.sections_[std::move(name)] = std::move(sec);
  }
  if (!r.done()) throw CheckpointError("checkpoint: trailing bytes after last section");
  return c;
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
  write(f);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("checkpoint: cannot open '" + path + "'");
  return read(f);
}

std::string describe_checkpoint(const Checkpoint& c) {
  std::ostringstream os;
  for (const auto& [name, sec] : c.sections()) {
    switch (sec.type) {
      case SectionType::network: {
        auto p = c.get_network(name);
        os << name << ": network,";
        for (const auto& s : p.spec)
          os << ' ' << s.in << "x" << s.out
             << (s.kind == LayerKind::hidden ? "+ln" : "");
        os << ", " << parameter_count(p) << " params\n";
        break;
      }
      case SectionType::adam: {
        auto st = c.get_adam(name);
        os << name << ": adam state, step " << st.step << "\n";
        break;
      }
      case SectionType::scalar:
        os << name << ": scalar = " << c.get_scalar(name) << "\n";
        break;
      case SectionType::counter:
        os << name << ": counter = " << c.get_counter(name) << "\n";
        break;
      case SectionType::text: {
        auto t = c.get_text(name);
        os << name << ": text, " << t.size() << " bytes\n";
        break;
      }
      case SectionType::scalar_adam: {
        auto st = c.get_scalar_adam(name);
        os << name << ": scalar adam state, step " << st.step << "\n";
        break;
      }
    }
  }
  return os.str();
}

}  // namespace flightrl::nn
