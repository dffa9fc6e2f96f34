#include "gammacrit/cache.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gammacrit {

const char* to_string(CacheKind kind) {
  switch (kind) {
    case CacheKind::kDn: return "dn";
    case CacheKind::kExpTable: return "exptable";
    case CacheKind::kLogS: return "logS";
    case CacheKind::kFrac: return "frac";
    case CacheKind::kGamma: return "gamma";
  }
  return "?";
}

std::optional<CacheKind> parse_cache_kind(std::string_view text) {
  for (CacheKind k : {CacheKind::kDn, CacheKind::kExpTable, CacheKind::kLogS, CacheKind::kFrac, CacheKind::kGamma})
    if (text == to_string(k)) return k;
  return std::nullopt;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool clean_field(std::string_view s) {
  return s.find('\t') == std::string_view::npos && s.find('\n') == std::string_view::npos &&
         s.find('\r') == std::string_view::npos;
}

template <class Int>
Int parse_int(std::string_view s, const char* what) {
  if (s.empty()) throw std::invalid_argument(std::string("missing ") + what);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(std::string(s), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  if (used != s.size() || v < 0) throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
  return static_cast<Int>(v);
}

}  // namespace

std::string CacheEntry::to_line() const {
  if (!clean_field(payload) || !clean_field(tool_version) || !clean_field(created_at))
    throw std::invalid_argument("CacheEntry: fields may not contain tabs or newlines");
  std::ostringstream os;
  os << to_string(key.kind) << '\t' << key.n << '\t' << key.digits << '\t' << payload << '\t' << tool_version << '\t'
     << created_at;
  return os.str();
}

CacheEntry CacheEntry::parse_line(std::string_view line) {
  const auto fields = split(line, '\t');
  if (fields.size() != 6) throw std::invalid_argument("cache record needs 6 fields");
  const auto kind = parse_cache_kind(fields[0]);
  if (!kind) throw std::invalid_argument("unknown cache kind '" + std::string(fields[0]) + "'");
  CacheEntry e;
  e.key = {*kind, parse_int<std::uint32_t>(fields[1], "n"), parse_int<long>(fields[2], "digits")};
  e.payload = std::string(fields[3]);
  e.tool_version = std::string(fields[4]);
  e.created_at = std::string(fields[5]);
  if (e.payload.empty() || e.tool_version.empty() || e.created_at.empty())
    throw std::invalid_argument("cache record has an empty field");
  return e;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultCache::ResultCache(std::filesystem::path file) : file_(std::move(file)) {
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ifstream in(file_);
  if (!in) {
    std::ofstream out(file_, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create cache file " + file_.string());
    out << kCacheHeader << '\n';
    return;
  }
  std::string line;
  if (!std::getline(in, line) || line != kCacheHeader)
    throw std::runtime_error("cache file " + file_.string() + " does not start with '" + std::string(kCacheHeader) + "'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      CacheEntry e = CacheEntry::parse_line(line);
      entries_.emplace(e.key, std::move(e));  // first record for a key wins
    } catch (const std::invalid_argument&) {
      // torn or foreign line
    }
  }
}

std::optional<std::filesystem::path> ResultCache::location_from_env() {
  const char* dir = std::getenv(std::string(kCacheEnvVar).c_str());
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir) / "results.tsv";
}

std::optional<CacheEntry> ResultCache::find(const CacheKey& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.tool_version != kToolVersion) return std::nullopt;
  return it->second;
}

std::optional<CacheEntry> ResultCache::find_best(CacheKind kind, std::uint32_t n, long min_digits) const {
  std::lock_guard lock(mutex_);
  std::optional<CacheEntry> best;
  for (auto it = entries_.lower_bound({kind, n, min_digits}); it != entries_.end(); ++it) {
    if (it->first.kind != kind || it->first.n != n) break;
    if (it->second.tool_version == kToolVersion) best = it->second;
  }
  return best;
}

bool ResultCache::put(const CacheKey& key, const std::string& payload) {
  std::lock_guard lock(mutex_);
  if (entries_.count(key) != 0) return false;
  CacheEntry e{key, payload, std::string(kToolVersion), utc_timestamp()};
  const std::string line = e.to_line();
  std::ofstream out(file_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to cache file " + file_.string());
  out << line << '\n';
  out.flush();
  entries_.emplace(key, std::move(e));
  return true;
}

std::size_t ResultCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

FracSource cached_source(ResultCache& cache, FracSource inner) {
  return [&cache, inner = std::move(inner)](std::uint32_t n, long digits) {
    const CacheKey key{CacheKind::kFrac, n, digits};
    if (auto hit = cache.find(key)) {
      try {
        return FracEnclosure::from_payload(n, digits, hit->payload);
      } catch (const std::invalid_argument&) {
        // fall through and recompute
      }
    }
    FracEnclosure fresh = inner(n, digits);
    cache.put(key, fresh.to_payload());
    return fresh;
  };
}

std::string SurveyCheckpoint::serialize() const {
  std::ostringstream os;
  os << "format=gammacrit-checkpoint-v1\n"
     << "tool_version=" << tool_version << '\n'
     << "n_from=" << n_from << '\n'
     << "digits=" << digits << '\n'
     << "rows_done=" << rows_done << '\n'
     << "csv_bytes=" << csv_bytes << '\n'
     << "frac_sum=" << frac_sum.get_str() << '\n'
     << "frac_count=" << frac_count << '\n';
  return os.str();
}

SurveyCheckpoint SurveyCheckpoint::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("checkpoint line without '='");
    kv[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  auto get = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::invalid_argument(std::string("checkpoint missing ") + k);
    return it->second;
  };
  if (get("format") != "gammacrit-checkpoint-v1") throw std::invalid_argument("unknown checkpoint format");
  SurveyCheckpoint c;
  c.tool_version = get("tool_version");
  c.n_from = parse_int<std::uint32_t>(get("n_from"), "n_from");
  c.digits = parse_int<long>(get("digits"), "digits");
  c.rows_done = parse_int<std::uint32_t>(get("rows_done"), "rows_done");
  c.csv_bytes = parse_int<std::uint64_t>(get("csv_bytes"), "csv_bytes");
  try {
    c.frac_sum = BigRational(get("frac_sum"));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad frac_sum in checkpoint");
  }
  c.frac_sum.canonicalize();
  c.frac_count = parse_int<std::uint32_t>(get("frac_count"), "frac_count");
  return c;
}

std::filesystem::path SurveyCheckpoint::path_for(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".ckpt");
}

void SurveyCheckpoint::save(const std::filesystem::path& csv) const {
  const auto target = path_for(csv);
  const auto tmp = std::filesystem::path(target.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << serialize();
  }
  std::filesystem::rename(tmp, target);
}

std::optional<SurveyCheckpoint> SurveyCheckpoint::load(const std::filesystem::path& csv) {
  std::ifstream in(path_for(csv), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace gammacrit
