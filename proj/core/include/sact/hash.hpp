#ifndef SACT_HASH_HPP_
#define SACT_HASH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace sact {

// 64-bit FNV-1a. Used for content fingerprints, never for security.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t v);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fingerprint(std::string_view bytes);

// Fingerprint of a file's bytes; throws ResourceError if it cannot be read.
std::string file_fingerprint(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace sact

#endif  // SACT_HASH_HPP_
