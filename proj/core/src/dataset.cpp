#include "proxbench/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string_view>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

constexpr char kMagic[4] = {'P', 'R', 'B', '1'};

class Writer {
 public:
  template <class T>
  void put(T value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_doubles(std::span<const double> values) {
    for (double v : values) put(v);
  }
  void put_tag(std::string_view tag) { bytes_.insert(bytes_.end(), tag.begin(), tag.end()); }
  void append_chunk(std::string_view tag, const Writer& payload) {
    put_tag(tag);
    put(static_cast<std::uint64_t>(payload.bytes_.size()));
    bytes_.insert(bytes_.end(), payload.bytes_.begin(), payload.bytes_.end());
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  template <class T>
  T get(std::string_view section) {
    need(sizeof(T), section);
    T value;
    std::memcpy(&value, data_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::vector<double> get_doubles(std::size_t count, std::string_view section) {
    if (count > (size_ - pos_) / sizeof(double)) fail_truncated(section);
    std::vector<double> out(count);
    std::memcpy(out.data(), data_ + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
    for (double v : out) {
      if (!std::isfinite(v)) throw FormatError("non-finite value in " + std::string(section));
    }
    return out;
  }
  std::string get_tag(std::string_view section) {
    need(4, section);
    std::string tag(reinterpret_cast<const char*>(data_ + pos_), 4);
    pos_ += 4;
    return tag;
  }
  Reader sub(std::size_t length, std::string_view section) {
    need(length, section);
    Reader r(data_ + pos_, length);
    pos_ += length;
    return r;
  }
  bool done() const noexcept { return pos_ == size_; }
  std::size_t remaining() const noexcept { return size_ - pos_; }

 private:
  void need(std::size_t count, std::string_view section) const {
    if (count > size_ - pos_) fail_truncated(section);
  }
  [[noreturn]] static void fail_truncated(std::string_view section) {
    throw FormatError("truncated dataset: missing " + std::string(section));
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

Transform default_transform(std::size_t ndims) {
  switch (ndims) {
    case 0: return Transform::kIdentity;
    case 1: return Transform::kDft1D;
    default: return Transform::kDft2D;
  }
}

void encode_map(Writer& w, const MeasurementMap& map) {
  w.put(static_cast<std::uint8_t>(map.transform()));
  w.put(static_cast<std::uint8_t>(map.modifier().index()));
  std::visit(
      [&](const auto& mod) {
        using T = std::decay_t<decltype(mod)>;
        if constexpr (std::is_same_v<T, PointwiseMask>) {
          w.put_doubles(mod.mask.values());
        } else if constexpr (std::is_same_v<T, CyclicShift>) {
          w.put(static_cast<std::uint32_t>(mod.offsets.size()));
          for (auto o : mod.offsets) w.put(static_cast<std::int64_t>(o));
        } else if constexpr (std::is_same_v<T, Translate>) {
          w.put(static_cast<std::uint32_t>(mod.offset.size()));
          w.put_doubles(mod.offset);
        }
      },
      map.modifier());
}

MeasurementMap decode_map(Reader& r, const Shape& shape) {
  const auto transform = r.get<std::uint8_t>("MAPS transform");
  const auto kind = r.get<std::uint8_t>("MAPS modifier");
  if (transform > 2) throw FormatError("MAPS: unknown transform " + std::to_string(transform));
  Modifier modifier;
  switch (kind) {
    case 0: modifier = NoModifier{}; break;
    case 1: {
      modifier = PointwiseMask{Signal(shape, 2, r.get_doubles(shape.num_blocks() * 2, "MAPS mask"))};
      break;
    }
    case 2: {
      const auto count = r.get<std::uint32_t>("MAPS shift");
      std::vector<std::int64_t> offsets;
      for (std::uint32_t i = 0; i < count; ++i) offsets.push_back(r.get<std::int64_t>("MAPS shift"));
      modifier = CyclicShift{std::move(offsets)};
      break;
    }
    case 3: {
      const auto count = r.get<std::uint32_t>("MAPS translation");
      modifier = Translate{r.get_doubles(count, "MAPS translation")};
      break;
    }
    default: throw FormatError("MAPS: unknown modifier " + std::to_string(kind));
  }
  try {
    return MeasurementMap(static_cast<Transform>(transform), std::move(modifier));
  } catch (const std::exception& e) {
    throw FormatError(std::string("MAPS: ") + e.what());
  }
}

void encode_support(Writer& w, const std::vector<std::uint8_t>& support) {
  w.put(static_cast<std::uint64_t>(support.size()));
  for (auto s : support) w.put(s);
}

std::vector<std::uint8_t> decode_support(Reader& r) {
  const auto count = r.get<std::uint64_t>("QUAL support");
  if (count > r.remaining()) throw FormatError("truncated dataset: missing QUAL support");
  std::vector<std::uint8_t> out(count);
  for (auto& s : out) s = r.get<std::uint8_t>("QUAL support");
  return out;
}

void encode_qualitative(Writer& w, const ConstraintSet& set) {
  w.put(static_cast<std::uint8_t>(set.kind()));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NonnegRealSupport>) {
          w.put(static_cast<std::uint8_t>(v.mode));
          encode_support(w, v.support);
        } else if constexpr (std::is_same_v<T, Sparsity>) {
          w.put(static_cast<std::uint64_t>(v.s));
        } else if constexpr (std::is_same_v<T, SparseNonnegCone>) {
          w.put(static_cast<std::uint64_t>(v.s));
          encode_support(w, v.support);
        } else {
          throw FormatError("qualitative set kind " + std::string(to_string(set.kind())) + " cannot be stored");
        }
      },
      set.variant());
}

ConstraintSet decode_qualitative(Reader& r) {
  const auto kind = static_cast<SetKind>(r.get<std::uint8_t>("QUAL kind"));
  switch (kind) {
    case SetKind::kNonnegRealSupport: {
      const auto mode = r.get<std::uint8_t>("QUAL mode");
      if (mode > 2) throw FormatError("QUAL: unknown support mode");
      return ConstraintSet::nonneg_real_support(decode_support(r), static_cast<SupportMode>(mode));
    }
    case SetKind::kSparsity: return ConstraintSet::sparsity(r.get<std::uint64_t>("QUAL sparsity"));
    case SetKind::kSparseNonnegCone: {
      const auto s = r.get<std::uint64_t>("QUAL sparsity");
      return ConstraintSet::sparse_nonneg_cone(s, decode_support(r));
    }
    default: throw FormatError("QUAL: unsupported set kind");
  }
}

}  // namespace

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> encode_dataset(const Instance& instance) {
  const Problem& p = instance.problem;
  const auto& sets = p.sets();
  Writer w;
  w.put_tag(std::string_view(kMagic, 4));
  w.put(kDatasetVersion);
  w.put(static_cast<std::uint32_t>(p.block_dim()));
  w.put(static_cast<std::uint32_t>(p.shape().rank()));
  for (auto extent : p.shape().dims()) w.put(static_cast<std::uint32_t>(extent));
  w.put(static_cast<std::uint32_t>(p.num_data_sets()));
  w.put(static_cast<std::uint8_t>(instance.truth ? 1 : 0));
  if (instance.truth) w.put_doubles(instance.truth->values());

  Writer maps;
  for (std::size_t j = p.first_data_index(); j < sets.size(); ++j) {
    const auto* a = std::get_if<Amplitude>(&sets[j].variant());
    if (a == nullptr) throw FormatError("only amplitude data sets can be stored");
    w.put_doubles(a->radii);
    encode_map(maps, a->map);
  }
  w.append_chunk("MAPS", maps);
  if (p.has_qualitative()) {
    Writer qual;
    encode_qualitative(qual, sets[0]);
    w.append_chunk("QUAL", qual);
  }
  Writer meta;
  meta.put(static_cast<std::uint8_t>(instance.meta.family));
  meta.put(instance.meta.seed);
  meta.put(static_cast<std::uint8_t>(instance.meta.noise ? 1 : 0));
  w.append_chunk("META", meta);
  w.append_chunk("END ", Writer{});
  return w.take();
}

namespace {

struct RawDataset {
  DatasetHeader header;
  std::optional<Signal> truth;
  std::vector<std::vector<double>> radii;
  std::optional<std::vector<MeasurementMap>> maps;
  std::optional<ConstraintSet> qualitative;
  InstanceMeta meta{Family::kFile, 0, false};
};

RawDataset parse(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes.data(), bytes.size());
  RawDataset raw;
  if (r.get_tag("magic") != std::string_view(kMagic, 4)) throw FormatError("not a PRB1 dataset (bad magic)");
  raw.header.version = r.get<std::uint32_t>("version");
  if (raw.header.version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(raw.header.version));
  }
  raw.header.block_dim = r.get<std::uint32_t>("block dimension");
  const auto ndims = r.get<std::uint32_t>("dimension count");
  if (ndims > 2) throw FormatError("dimension count must be 0, 1 or 2");
  for (std::uint32_t i = 0; i < ndims; ++i) raw.header.dims.push_back(r.get<std::uint32_t>("dimensions"));
  raw.header.measurements = r.get<std::uint32_t>("measurement count");
  const auto flag = r.get<std::uint8_t>("truth flag");
  if (flag > 1) throw FormatError("truth flag must be 0 or 1");
  raw.header.has_truth = flag == 1;

  Shape shape;
  try {
    shape = Shape(raw.header.dims);
  } catch (const std::exception& e) {
    throw FormatError(std::string("dimensions: ") + e.what());
  }
  const std::size_t n = shape.num_blocks();
  const std::size_t d = raw.header.block_dim;
  if (d < 1 || d > 3) throw FormatError("block dimension must be 1, 2 or 3");
  if (raw.header.has_truth) raw.truth = Signal(shape, d, r.get_doubles(n * d, "truth"));
  for (std::uint32_t j = 0; j < raw.header.measurements; ++j) {
    raw.radii.push_back(r.get_doubles(n, "measurements"));
    for (double b : raw.radii.back()) {
      if (b < 0.0) throw FormatError("negative measurement");
    }
  }

  // Once chunks start, the list must be closed by END so that a file cut at a
  // chunk boundary is not mistaken for a complete one.
  bool closed = r.done();
  while (!r.done()) {
    const std::string tag = r.get_tag("chunk tag");
    if (tag == "END ") {
      if (r.get<std::uint64_t>("END length") != 0) throw FormatError("END: nonzero length");
      if (!r.done()) throw FormatError("END: trailing bytes");
      closed = true;
      break;
    }
    const auto length = r.get<std::uint64_t>(tag + " length");
    if (length > r.remaining()) throw FormatError("truncated dataset: missing " + tag + " payload");
    Reader chunk = r.sub(static_cast<std::size_t>(length), tag + " payload");
    raw.header.chunks.push_back(tag);
    if (tag == "MAPS") {
      std::vector<MeasurementMap> maps;
      for (std::uint32_t j = 0; j < raw.header.measurements; ++j) maps.push_back(decode_map(chunk, shape));
      raw.maps = std::move(maps);
    } else if (tag == "QUAL") {
      raw.qualitative = decode_qualitative(chunk);
    } else if (tag == "META") {
      const auto family = chunk.get<std::uint8_t>("META family");
      if (family > static_cast<std::uint8_t>(Family::kToy)) throw FormatError("META: unknown family");
      raw.meta.family = static_cast<Family>(family);
      raw.meta.seed = chunk.get<std::uint64_t>("META seed");
      raw.meta.noise = chunk.get<std::uint8_t>("META noise") != 0;
    }
    // Unknown chunks are skipped.
    if (tag == "MAPS" || tag == "QUAL" || tag == "META") {
      if (!chunk.done()) throw FormatError(tag + ": trailing bytes");
    }
  }
  if (!closed) throw FormatError("truncated dataset: missing END chunk");
  raw.header.checksum = fnv1a64(bytes);
  return raw;
}

}  // namespace

Instance decode_dataset(const std::vector<std::uint8_t>& bytes) {
  RawDataset raw = parse(bytes);
  const Shape shape(raw.header.dims);
  std::vector<ConstraintSet> sets;
  if (raw.qualitative) sets.push_back(*raw.qualitative);
  for (std::size_t j = 0; j < raw.radii.size(); ++j) {
    MeasurementMap map = raw.maps ? (*raw.maps)[j] : MeasurementMap(default_transform(shape.rank()), NoModifier{});
    sets.push_back(ConstraintSet::amplitude(std::move(map), std::move(raw.radii[j])));
  }
  try {
    Problem problem(shape, raw.header.block_dim, std::move(sets), raw.qualitative.has_value());
    return Instance{std::move(problem), std::move(raw.truth), raw.meta};
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("dataset does not describe a valid problem: ") + e.what());
  }
}

DatasetHeader inspect_dataset(const std::vector<std::uint8_t>& bytes) { return parse(bytes).header; }

void save_dataset(const Instance& instance, const std::filesystem::path& path) {
  const auto bytes = encode_dataset(instance);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

Instance load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_dataset(bytes);
}

}  // namespace proxbench
