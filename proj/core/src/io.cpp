#include "pathlinks/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "pathlinks/error.hpp"

namespace pathlinks::io {

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_file, "cannot open " + file.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::missing_file, "cannot write " + file.string());
  return out;
}

std::string read_file(const std::filesystem::path& file) {
  auto in = open_input(file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void for_each_data_line(const std::filesystem::path& file,
                        const std::function<void(std::size_t, std::string_view)>& fn) {
  auto in = open_input(file);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    fn(line_number, view);
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted)
        throw Error(ErrorCode::parse_failure, "stray quote in CSV field");
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw Error(ErrorCode::parse_failure, "text after closing quote");
      field.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::parse_failure, "unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc{} || result.ptr != end || text.empty())
    throw Error(ErrorCode::parse_failure, "not an integer: '" + std::string(text) + "'");
  return value;
}

double parse_double(std::string_view text) {
  double value = 0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc{} || result.ptr != end || text.empty())
    throw Error(ErrorCode::parse_failure, "not a number: '" + std::string(text) + "'");
  return value;
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx_, data, size); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int size = 0;
    EVP_DigestFinal_ex(ctx_, digest.data(), &size);
    std::string out;
    out.reserve(size * 2);
    constexpr char kHex[] = "0123456789abcdef";
    for (unsigned int i = 0; i < size; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 sha;
  sha.update(bytes.data(), bytes.size());
  return sha.hex();
}

std::string sha256_file(const std::filesystem::path& file) {
  auto in = open_input(file);
  Sha256 sha;
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    sha.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  return sha.hex();
}

std::string Metadata::config_hash() const {
  std::string canonical;
  for (const auto& [key, value] : config) {
    canonical += key;
    canonical += '=';
    canonical += value;
    canonical += '\n';
  }
  return sha256_hex(canonical);
}

void Metadata::write_comment_block(std::ostream& out) const {
  out << "# tool=" << tool << '\n';
  out << "# version=" << version << '\n';
  out << "# command=" << command << '\n';
  out << "# config_hash=" << config_hash() << '\n';
  for (const auto& [key, value] : config) out << "# config." << key << '=' << value << '\n';
  for (const auto& [name, sum] : input_checksums) out << "# input." << name << '=' << sum << '\n';
}

std::map<std::string, std::string> read_comment_block(const std::filesystem::path& file) {
  auto in = open_input(file);
  std::map<std::string, std::string> block;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() != '#') break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(1, eq - 1);
    while (!key.empty() && key.front() == ' ') key.erase(key.begin());
    block[key] = line.substr(eq + 1);
  }
  return block;
}

}  // namespace pathlinks::io
