#pragma once

// On-disk formats: spectrum files, the run manifest, and comma-separated tables.
//
// Spectrum file (one per q, d, family):
//
//   # modulus=1,1,0,1
//   q,d,family,k,count
//   8,2,polynomial,1,448
//   ...
//
// one row per nonzero k, ascending. Mode is not part of the file, so full and
// reduced censuses write identical bytes; it is kept in the manifest.

#include "cyclecensus/census.hpp"

#include <boost/crc.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclecensus {

namespace fs = std::filesystem;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary sibling and rename, so readers never see partial files.
inline void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string crc32_hex(const std::string& data) {
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size());
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc.checksum()));
  return buf;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join_u32(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::string spectrum_file_name(std::uint32_t q, unsigned d, Family family) {
  return "census_" + to_string(family) + "_d" + std::to_string(d) + "_q" + std::to_string(q) + ".csv";
}

inline std::string format_spectrum_file(const CensusRecord& rec) {
  std::string out = "# modulus=" + join_u32(rec.modulus) + "\n";
  out += "q,d,family,k,count\n";
  const std::string prefix = std::to_string(rec.q) + "," + std::to_string(rec.d) + "," + to_string(rec.family) + ",";
  for (auto [k, count] : rec.aggregate.nonzero()) out += prefix + std::to_string(k) + "," + std::to_string(count) + "\n";
  return out;
}

namespace detail {

inline std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw FormatError("bad " + what + ": '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw FormatError("bad " + what + ": '" + s + "'");
  }
}

}  // namespace detail

/// Parses a spectrum file. Total map count is derived from (q, d, family);
/// the mode is not stored and reads back as full.
inline CensusRecord parse_spectrum_file(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# modulus=", 0) != 0) throw FormatError("spectrum file: missing modulus line");
  CensusRecord rec;
  for (const auto& c : split(line.substr(10), ',')) rec.modulus.push_back(static_cast<std::uint32_t>(detail::parse_u64(c, "modulus coefficient")));
  if (!std::getline(in, line) || line != "q,d,family,k,count") throw FormatError("spectrum file: missing header");
  bool have_key = false;
  std::size_t last_k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw FormatError("spectrum file: expected 5 fields in '" + line + "'");
    const auto q = static_cast<std::uint32_t>(detail::parse_u64(f[0], "q"));
    const auto d = static_cast<unsigned>(detail::parse_u64(f[1], "d"));
    const Family family = parse_family(f[2]);
    if (!have_key) {
      rec.q = q;
      rec.d = d;
      rec.family = family;
      have_key = true;
    } else if (q != rec.q || d != rec.d || family != rec.family) {
      throw FormatError("spectrum file: mixed (q, d, family) rows");
    }
    const auto k = static_cast<std::size_t>(detail::parse_u64(f[3], "k"));
    if (k <= last_k) throw FormatError("spectrum file: lengths must be strictly increasing");
    last_k = k;
    rec.aggregate.add(k, detail::parse_u64(f[4], "count"));
  }
  if (!have_key) throw FormatError("spectrum file: no rows");
  const auto pp = prime_power_decompose(rec.q);
  if (!pp || rec.modulus.size() != pp->n + 1) throw FormatError("spectrum file: modulus inconsistent with q");
  rec.total_maps = family_size(rec.q, rec.d, rec.family);
  return rec;
}

inline CensusRecord load_spectrum_file(const fs::path& path) {
  try {
    return parse_spectrum_file(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// All spectrum files in `dir` for (d, family), ascending q.
inline std::vector<CensusRecord> load_census_dir(const fs::path& dir, unsigned d, Family family) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::map<std::uint32_t, fs::path> found;
  const std::string prefix = "census_" + to_string(family) + "_d" + std::to_string(d) + "_q";
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
    const std::string qs = name.substr(prefix.size(), name.size() - prefix.size() - 4);
    found[static_cast<std::uint32_t>(detail::parse_u64(qs, "q in file name"))] = entry.path();
  }
  std::vector<CensusRecord> out;
  for (const auto& [q, path] : found) out.push_back(load_spectrum_file(path));
  return out;
}

/// Key-value manifest ("key = value" per line, keys sorted).
class Manifest {
 public:
  static constexpr const char* kFileName = "manifest.txt";

  static Manifest load(const fs::path& dir) {
    Manifest m;
    const fs::path path = dir / kFileName;
    if (!fs::exists(path)) return m;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw FormatError("manifest: malformed line '" + line + "'");
      m.entries_[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return m;
  }

  std::string format() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

  void save(const fs::path& dir) const { write_file_atomic(dir / kFileName, format()); }

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  std::optional<std::string> get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Records a result file's checksum.
  void register_file(const std::string& name, const std::string& content) { set("file." + name + ".crc32", crc32_hex(content)); }

  std::vector<std::string> files() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
      if (k.rfind("file.", 0) == 0 && k.size() > 11 && k.compare(k.size() - 6, 6, ".crc32") == 0)
        out.push_back(k.substr(5, k.size() - 11));
    }
    return out;
  }

  /// True iff `name` is registered, present in `dir`, and matches its checksum.
  bool file_valid(const fs::path& dir, const std::string& name) const {
    const auto crc = get("file." + name + ".crc32");
    if (!crc || !fs::exists(dir / name)) return false;
    return crc32_hex(read_file(dir / name)) == *crc;
  }

  /// Problems with registered files: missing or checksum mismatch.
  std::vector<std::string> verify(const fs::path& dir) const {
    std::vector<std::string> problems;
    for (const auto& name : files()) {
      if (!fs::exists(dir / name))
        problems.push_back(name + ": missing");
      else if (!file_valid(dir, name))
        problems.push_back(name + ": checksum mismatch");
    }
    return problems;
  }

 private:
  std::map<std::string, std::string> entries_;
};

/// Minimal CSV table builder; values are written verbatim.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void comment(const std::string& text) { comments_.push_back(text); }
  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
    rows_.push_back(std::move(cells));
  }
  std::string str() const {
    std::string out;
    for (const auto& c : comments_) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cyclecensus
