#include "hyperdet/cache.hpp"

#include <unistd.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "hyperdet/checked.hpp"

namespace hyperdet::cache {

namespace fs = std::filesystem;

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::epsilon_power:
      return "epsilon-power";
    case Kind::contractor:
      return "contractor";
  }
  return "unknown";
}

std::string CacheKey::filename() const {
  return std::string(kind_name(kind)) + "_d" + std::to_string(d) + "_N" + std::to_string(order) +
         "_" + std::string(backend_name(backend)) + ".hdc";
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <Scalar T>
CacheEntry<T> epsilon_power_entry(std::size_t d, std::size_t order, SparseTensor<T> power) {
  CacheEntry<T> e;
  e.key = {Kind::epsilon_power, d, order, ScalarTraits<T>::backend};
  e.payload = std::move(power);
  return e;
}

template <Scalar T>
CacheEntry<T> contractor_entry(Contractor<T> contractor) {
  CacheEntry<T> e;
  e.key = {Kind::contractor, contractor.d, contractor.order, ScalarTraits<T>::backend};
  e.payload = std::move(contractor);
  return e;
}

namespace {

constexpr char kMagic[4] = {'H', 'D', 'C', '1'};

class Writer {
 public:
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + n);
  }
  void magnitude(const mpz_class& z, bool with_sign) {
    std::size_t count = (mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8;
    if (sgn(z) == 0) count = 0;
    std::vector<std::uint8_t> buf(count);
    if (count) mpz_export(buf.data(), &count, -1, 1, 0, 0, z.get_mpz_t());
    u64(with_sign ? (static_cast<std::uint64_t>(count) << 1) | (sgn(z) < 0 ? 1 : 0) : count);
    raw(buf.data(), count);
  }
  void value(const Rational& v) {
    magnitude(v.get_num(), true);
    magnitude(v.get_den(), false);
  }
  void value(double v) { f64(v); }
  void value(const Complex& v) {
    f64(v.real());
    f64(v.imag());
  }

  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b_[pos_ + k]) << (8 * k);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  mpz_class magnitude(std::uint64_t count) {
    need(count);
    mpz_class z;
    if (count) mpz_import(z.get_mpz_t(), count, -1, 1, 0, 0, b_.data() + pos_);
    pos_ += count;
    return z;
  }
  void value(Rational& out) {
    const std::uint64_t nw = u64();
    mpz_class num = magnitude(nw >> 1);
    if (nw & 1) num = -num;
    mpz_class den = magnitude(u64());
    if (den == 0) throw CorruptionError("cache file holds a zero denominator");
    out = Rational(num, den);
    out.canonicalize();
  }
  void value(double& out) { out = f64(); }
  void value(Complex& out) {
    const double re = f64();
    const double im = f64();
    out = {re, im};
  }
  std::size_t position() const noexcept { return pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > b_.size() - pos_) throw CorruptionError("cache file is truncated");
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

template <Scalar T>
std::vector<std::uint8_t> serialize(CacheEntry<T>& entry) {
  Writer w;
  w.raw(kMagic, 4);
  w.u64(entry.version);
  w.u64(static_cast<std::uint64_t>(entry.key.kind));
  w.u64(entry.key.d);
  w.u64(entry.key.order);
  w.u64(static_cast<std::uint64_t>(entry.key.backend));
  if (const auto* sp = std::get_if<SparseTensor<T>>(&entry.payload)) {
    if (entry.key.kind != Kind::epsilon_power) throw ArgumentError("sparse payload needs kind epsilon-power");
    w.u64(sp->order());
    w.u64(sp->shape().extent(0));
    w.u64(sp->nnz());
    for (std::size_t k = 0; k < sp->nnz(); ++k) {
      w.u64(sp->linear_offset(k));
      w.value(sp->value(k));
    }
  } else {
    const auto& c = std::get<Contractor<T>>(entry.payload);
    if (entry.key.kind != Kind::contractor) throw ArgumentError("dense payload needs kind contractor");
    w.u64(c.tensor.order());
    w.u64(c.side());
    w.u64(c.tensor.size());
    for (const T& v : c.tensor.values()) w.value(v);
  }
  entry.checksum = fnv1a64(w.bytes);
  w.u64(entry.checksum);
  return std::move(w.bytes);
}

template <Scalar T>
CacheEntry<T> deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 + 8 + 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CorruptionError("not an HDC1 cache file");
  }
  Reader header(bytes.subspan(4));
  const std::uint64_t version = header.u64();
  if (version != kFormatVersion) {
    throw VersionError("unsupported cache format version " + std::to_string(version) +
                       " (supported: " + std::to_string(kFormatVersion) + ")");
  }
  const auto body = bytes.first(bytes.size() - 8);
  Reader tail(bytes.last(8));
  const std::uint64_t stored = tail.u64();
  if (fnv1a64(body) != stored) throw CorruptionError("cache file checksum mismatch");

  Reader r(body.subspan(4 + 8));
  CacheEntry<T> e;
  e.version = version;
  e.checksum = stored;
  const std::uint64_t kind = r.u64();
  if (kind != static_cast<std::uint64_t>(Kind::epsilon_power) &&
      kind != static_cast<std::uint64_t>(Kind::contractor)) {
    throw CorruptionError("unknown cache entry kind " + std::to_string(kind));
  }
  e.key.kind = static_cast<Kind>(kind);
  e.key.d = r.u64();
  e.key.order = r.u64();
  e.key.backend = static_cast<Backend>(r.u64());
  if (e.key.backend != ScalarTraits<T>::backend) {
    throw CorruptionError("cache entry backend does not match the requested backend");
  }
  const std::uint64_t order = r.u64();
  const std::uint64_t side = r.u64();
  const std::uint64_t count = r.u64();
  if (order == 0 || side == 0 || e.key.d == 0 || e.key.order == 0 || order != e.key.d) {
    throw CorruptionError("inconsistent cache header");
  }
  try {
    const Shape shape = Shape::cubical(side, order);
    if (e.key.kind == Kind::epsilon_power) {
      if (count > shape.size()) throw CorruptionError("nonzero count exceeds tensor size");
      std::vector<std::size_t> coords;
      std::vector<T> values(count);
      std::uint64_t prev = 0;
      for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t off = r.u64();
        if (off >= shape.size() || (k > 0 && off <= prev)) {
          throw CorruptionError("sparse offsets out of order or out of range");
        }
        prev = off;
        for (std::size_t c : unravel(off, shape)) coords.push_back(c - 1);
        r.value(values[k]);
      }
      e.payload = SparseTensor<T>::from_coordinates(shape, std::move(coords), std::move(values));
    } else {
      if (count != shape.size()) throw CorruptionError("dense entry count does not match shape");
      std::vector<T> values(count);
      for (auto& v : values) r.value(v);
      Contractor<T> c;
      c.d = e.key.d;
      c.order = e.key.order;
      c.version = version;
      c.tensor = Hypermatrix<T>(shape, std::move(values));
      if (count_monotone(e.key.d, e.key.order) != side) {
        throw CorruptionError("contractor side does not match d and N");
      }
      c.slots = monotone_offsets(e.key.d, e.key.order);
      e.payload = std::move(c);
    }
  } catch (const CorruptionError&) {
    throw;
  } catch (const Error& err) {
    throw CorruptionError(std::string("malformed cache payload: ") + err.what());
  }
  if (r.position() != body.size() - 4 - 8) throw CorruptionError("trailing bytes in cache file");
  return e;
}

template <Scalar T>
fs::path store(CacheEntry<T>& entry, const fs::path& dir) {
  const auto bytes = serialize(entry);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StorageError("cannot create cache directory " + dir.string() + ": " + ec.message());
  const fs::path target = dir / entry.key.filename();
  static std::atomic<unsigned> counter{0};
  const fs::path tmp = dir / (entry.key.filename() + ".tmp." + std::to_string(::getpid()) + "." +
                              std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw StorageError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw StorageError("cannot move cache file into place at " + target.string());
  }
  return target;
}

template <Scalar T>
std::optional<CacheEntry<T>> load(const CacheKey& key, const fs::path& dir) {
  const fs::path path = dir / key.filename();
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  CacheEntry<T> e = deserialize<T>(bytes);
  if (!(e.key == key)) throw CorruptionError("cache file " + path.string() + " holds a different key");
  return e;
}

template <Scalar T>
Contractor<T> ensure_contractor(std::size_t d, std::size_t order, const fs::path& dir,
                                const Budget& budget, bool* built) {
  const CacheKey key{Kind::contractor, d, order, ScalarTraits<T>::backend};
  if (built) *built = false;
  try {
    if (auto hit = load<T>(key, dir)) return std::get<Contractor<T>>(std::move(hit->payload));
  } catch (const CorruptionError&) {
    // rebuilt below
  } catch (const VersionError&) {
  }
  auto entry = contractor_entry(build_contractor<T>(d, order, budget));
  store(entry, dir);
  if (built) *built = true;
  return std::get<Contractor<T>>(std::move(entry.payload));
}

template <Scalar T>
SparseTensor<T> ensure_epsilon_power(std::size_t d, std::size_t order, const fs::path& dir,
                                     const Budget& budget, bool* built) {
  const CacheKey key{Kind::epsilon_power, d, order, ScalarTraits<T>::backend};
  if (built) *built = false;
  try {
    if (auto hit = load<T>(key, dir)) return std::get<SparseTensor<T>>(std::move(hit->payload));
  } catch (const CorruptionError&) {
  } catch (const VersionError&) {
  }
  auto entry = epsilon_power_entry(d, order, epsilon_kron_power<T>(d, order, budget.max_epsilon_nonzeros));
  store(entry, dir);
  if (built) *built = true;
  return std::get<SparseTensor<T>>(std::move(entry.payload));
}

template <Scalar T>
std::shared_ptr<const Contractor<T>> ContractorCache<T>::contractor(std::size_t d, std::size_t order) {
  std::lock_guard lock(mu_);
  auto& slot = memo_[{d, order}];
  if (!slot) {
    bool built = false;
    slot = std::make_shared<const Contractor<T>>(ensure_contractor<T>(d, order, dir_, budget_, &built));
    if (built) ++builds_;
  }
  return slot;
}

#define HYPERDET_INSTANTIATE_CACHE(T)                                                              \
  template CacheEntry<T> epsilon_power_entry(std::size_t, std::size_t, SparseTensor<T>);          \
  template CacheEntry<T> contractor_entry(Contractor<T>);                                          \
  template std::vector<std::uint8_t> serialize(CacheEntry<T>&);                                    \
  template CacheEntry<T> deserialize<T>(std::span<const std::uint8_t>);                            \
  template fs::path store(CacheEntry<T>&, const fs::path&);                                        \
  template std::optional<CacheEntry<T>> load<T>(const CacheKey&, const fs::path&);                 \
  template Contractor<T> ensure_contractor<T>(std::size_t, std::size_t, const fs::path&,           \
                                              const Budget&, bool*);                               \
  template SparseTensor<T> ensure_epsilon_power<T>(std::size_t, std::size_t, const fs::path&,      \
                                                   const Budget&, bool*);                          \
  template class ContractorCache<T>;

HYPERDET_INSTANTIATE_CACHE(Rational)
HYPERDET_INSTANTIATE_CACHE(double)
HYPERDET_INSTANTIATE_CACHE(Complex)

}  // namespace hyperdet::cache
