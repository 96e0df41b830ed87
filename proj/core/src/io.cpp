#include "gstk/io.hpp"

#include <atomic>
#include <fstream>
#include <iterator>

#include "gstk/error.hpp"

namespace gstk {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return bytes;
}

std::string read_text_file(const fs::path& path) {
  auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

namespace {

fs::path temp_name_for(const fs::path& final) {
  static std::atomic<unsigned> counter{0};
  auto name = final.filename().string();
  return final.parent_path() / ("." + name + ".tmp" + std::to_string(counter++));
}

}  // namespace

AtomicWriteSet::~AtomicWriteSet() {
  std::error_code ec;
  for (const auto& p : pending_) fs::remove(p.temp, ec);
}

void AtomicWriteSet::add(const fs::path& path, std::string_view bytes) {
  const auto temp = temp_name_for(path);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    pending_.push_back({temp, path});
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw IoError("error while writing '" + path.string() + "'");
  }
}

void AtomicWriteSet::add(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  add(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void AtomicWriteSet::commit() {
  for (const auto& p : pending_) {
    std::error_code ec;
    fs::rename(p.temp, p.final, ec);
    if (ec) throw IoError("cannot move output into '" + p.final.string() + "': " + ec.message());
  }
  pending_.clear();
}

fs::path bsq_payload_path(const fs::path& header_path) {
  auto p = header_path;
  p.replace_extension(".bsq");
  if (p == header_path) p += ".bsq";
  return p;
}

MultibandImage load_image(const fs::path& path) {
  if (path.extension() == ".pgm") return MultibandImage({read_pgm(read_file(path))});
  const auto header = read_text_file(path);
  const auto payload = read_file(bsq_payload_path(path));
  return read_bsq(header, payload);
}

void stage_image(AtomicWriteSet& out, const fs::path& path, const MultibandImage& image) {
  if (path.extension() == ".pgm") {
    if (image.band_count() != 1)
      throw DomainError("'" + path.string() + "': PGM output holds exactly one band");
    out.add(path, write_pgm(image.band(0)));
    return;
  }
  auto files = write_bsq(image);
  out.add(path, files.header);
  out.add(bsq_payload_path(path), files.payload);
}

std::vector<ResponseField> load_responses(const fs::path& header_path) {
  const auto header = read_text_file(header_path);
  const auto payload = read_file(bsq_payload_path(header_path));
  return read_response_bsq(header, payload);
}

void stage_responses(AtomicWriteSet& out, const fs::path& header_path,
                     const std::vector<ResponseField>& fields) {
  auto files = write_response_bsq(fields);
  out.add(header_path, files.header);
  out.add(bsq_payload_path(header_path), files.payload);
}

}  // namespace gstk
