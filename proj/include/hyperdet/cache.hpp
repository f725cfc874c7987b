#pragma once

// On-disk store for precomputed Levi-Civita powers and contractors.
//
// File layout (all integers little-endian unsigned 64-bit unless noted):
//
//   "HDC1"                          4 magic bytes
//   version                         format version, currently 1
//   kind d N backend order side count
//   payload
//     sparse (epsilon-power): count x (psi offset, value), offsets ascending
//     dense  (contractor):    count values in psi order
//   checksum                        FNV-1a 64 over every preceding byte
//
// Values: float64 as IEEE-754 binary64; complex128 as (re, im) binary64
// pairs; rationals as numerator then denominator, each a length word
// followed by that many magnitude bytes, least significant first. The
// numerator's length word is (byte_count << 1) | negative; the
// denominator's is its byte count.
//
// Files are named <dir>/<kind>_d<d>_N<N>_<backend>.hdc and written through a
// temporary file plus rename, so readers see a complete file or none.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hyperdet/engines.hpp"
#include "hyperdet/sparse.hpp"

namespace hyperdet::cache {

inline constexpr std::uint64_t kFormatVersion = 1;

enum class Kind : std::uint64_t { epsilon_power = 1, contractor = 2 };

std::string_view kind_name(Kind k);

struct CacheKey {
  Kind kind = Kind::contractor;
  std::size_t d = 0;
  std::size_t order = 0;
  Backend backend = Backend::rational;

  std::string filename() const;
  bool operator==(const CacheKey&) const = default;
};

template <Scalar T>
struct CacheEntry {
  CacheKey key;
  std::variant<SparseTensor<T>, Contractor<T>> payload;
  std::uint64_t checksum = 0;  // filled by serialize / deserialize
  std::uint64_t version = kFormatVersion;
};

template <Scalar T>
CacheEntry<T> epsilon_power_entry(std::size_t d, std::size_t order, SparseTensor<T> power);

template <Scalar T>
CacheEntry<T> contractor_entry(Contractor<T> contractor);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

// Canonical byte image of an entry; sets entry.checksum.
template <Scalar T>
std::vector<std::uint8_t> serialize(CacheEntry<T>& entry);

// VersionError on an unsupported version, CorruptionError on any other
// inconsistency (bad magic, checksum mismatch, truncated or malformed payload).
template <Scalar T>
CacheEntry<T> deserialize(std::span<const std::uint8_t> bytes);

// Atomic write; returns the file path. StorageError on I/O failure.
template <Scalar T>
std::filesystem::path store(CacheEntry<T>& entry, const std::filesystem::path& dir);

// std::nullopt when the file does not exist. The stored header must match `key`.
template <Scalar T>
std::optional<CacheEntry<T>> load(const CacheKey& key, const std::filesystem::path& dir);

// Load, or build and store. A corrupt or outdated file is rebuilt and replaced.
template <Scalar T>
Contractor<T> ensure_contractor(std::size_t d, std::size_t order, const std::filesystem::path& dir,
                                const Budget& budget = {}, bool* built = nullptr);

template <Scalar T>
SparseTensor<T> ensure_epsilon_power(std::size_t d, std::size_t order,
                                     const std::filesystem::path& dir, const Budget& budget = {},
                                     bool* built = nullptr);

// Directory-backed contractor source with an in-process memo. Counts how
// many contractors it had to build, as opposed to load.
template <Scalar T>
class ContractorCache : public ContractorSource<T> {
 public:
  ContractorCache(std::filesystem::path dir, Budget budget = {})
      : dir_(std::move(dir)), budget_(budget) {}

  std::shared_ptr<const Contractor<T>> contractor(std::size_t d, std::size_t order) override;

  std::size_t builds() const noexcept { return builds_; }
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  Budget budget_;
  std::mutex mu_;
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const Contractor<T>>> memo_;
  std::atomic<std::size_t> builds_{0};
};

}  // namespace hyperdet::cache
