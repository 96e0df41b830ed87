#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gstk/raster.hpp"

namespace gstk {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Collects output files and publishes them together. Each file is first
/// written next to its destination under a temporary name; commit() renames
/// them into place. Uncommitted temporaries are removed on destruction, so a
/// failure midway leaves no partial outputs behind.
class AtomicWriteSet {
 public:
  AtomicWriteSet() = default;
  AtomicWriteSet(const AtomicWriteSet&) = delete;
  AtomicWriteSet& operator=(const AtomicWriteSet&) = delete;
  ~AtomicWriteSet();

  void add(const std::filesystem::path& path, std::string_view bytes);
  void add(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
  void commit();

 private:
  struct Pending {
    std::filesystem::path temp;
    std::filesystem::path final;
  };
  std::vector<Pending> pending_;
};

/// Payload file paired with a GSTK1 header path: `scene.hdr` -> `scene.bsq`.
std::filesystem::path bsq_payload_path(const std::filesystem::path& header_path);

/// Loads `.pgm` as a one-band image, anything else as a GSTK1 header.
MultibandImage load_image(const std::filesystem::path& path);
void stage_image(AtomicWriteSet& out, const std::filesystem::path& path,
                 const MultibandImage& image);

std::vector<ResponseField> load_responses(const std::filesystem::path& header_path);
void stage_responses(AtomicWriteSet& out, const std::filesystem::path& header_path,
                     const std::vector<ResponseField>& fields);

}  // namespace gstk
