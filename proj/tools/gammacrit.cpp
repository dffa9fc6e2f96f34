// gammacrit: command-line front end.
//
// Exit codes: 0 success, 1 verification FAIL, 2 usage, 3 undecided,
// 4 precision or convergence cap.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gammacrit/analytic_oracles.hpp"
#include "gammacrit/bigfloat_engine.hpp"
#include "gammacrit/cache.hpp"
#include "gammacrit/criteria.hpp"
#include "gammacrit/exact_core.hpp"
#include "gammacrit/sn_builder.hpp"

namespace fs = std::filesystem;
using namespace gammacrit;

namespace {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kUndecided = 3,
  kPrecisionCap = 4,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint32_t kMaxIndex = 1u << 24;

std::unique_ptr<ResultCache> open_cache() {
  if (auto file = ResultCache::location_from_env()) return std::make_unique<ResultCache>(*file);
  return nullptr;
}

// Looks `key` up in the cache, otherwise computes and stores it.
template <class Compute>
std::string cached(ResultCache* cache, const CacheKey& key, Compute&& compute) {
  if (cache != nullptr) {
    if (auto hit = cache->find(key)) return hit->payload;
  }
  std::string value = compute();
  if (cache != nullptr) cache->put(key, value);
  return value;
}

FracSource make_source(ResultCache* cache, const FracOptions& options) {
  FracSource engine = engine_source(options);
  return cache != nullptr ? cached_source(*cache, std::move(engine)) : engine;
}

FracOptions frac_options(long max_bits) {
  FracOptions options;
  if (max_bits > 0) options.max_precision = max_bits;
  return options;
}

// ---------------------------------------------------------------------------

int cmd_dn(std::uint32_t n) {
  auto cache = open_cache();
  std::cout << cached(cache.get(), {CacheKind::kDn, n, 0}, [&] { return lcm_upto(n).get_str(); }) << '\n';
  return kOk;
}

int cmd_sn(std::uint32_t n, const std::string& format) {
  auto cache = open_cache();
  if (format == "factored") {
    std::cout << cached(cache.get(), {CacheKind::kExpTable, n, 0}, [&] { return s_n_factored(n).S.to_string(); })
              << '\n';
  } else if (format == "grouped") {
    std::cout << render_grouped(s_n_factored(n)) << '\n';
  } else {
    std::cout << decimal_digit_count(s_n_factored(n).S).get_str() << '\n';
  }
  return kOk;
}

int cmd_frac(std::uint32_t n, long digits, long max_bits, bool show_enclosure) {
  auto cache = open_cache();
  const FracEnclosure e = make_source(cache.get(), frac_options(max_bits))(n, digits);
  std::cout << e.truncated << " (± " << e.radius_text << ")\n";
  if (show_enclosure) std::cout << "enclosure: " << e.mid_text << " ± " << e.radius_text << '\n';
  return kOk;
}

int cmd_gamma(std::uint32_t n, long digits) {
  auto cache = open_cache();
  std::cout << cached(cache.get(), {CacheKind::kGamma, n, digits}, [&] {
    const GammaApprox g = gamma_approx(n, std::ldexp(1.0, -static_cast<int>(bits_for_digits(digits + 4))));
    std::ostringstream os;
    os << render_fixed(g.gamma.mid(), digits, DecimalRounding::kHalfEven) << " (± "
       << render_radius(g.gamma.rad()) << ", method error ~ " << render_radius(abs_up(g.method_error.mid()))
       << ")";
    return os.str();
  }) << '\n';
  return kOk;
}

int cmd_verify(std::uint32_t n, const std::string& oracle) {
  const CertifiedReal I = oracle == "quad" ? quadrature_In(n) : series_In(n, std::ldexp(1e-12, -4 * static_cast<int>(n)));
  const CertifiedReal gamma_ref = gamma_reference_bits(4 * static_cast<long>(n) + 120);
  const CertifiedReal residual = identity5_residual(n, I, gamma_ref);
  const bool pass = residual.contains_zero();
  std::cout << (pass ? "PASS" : "FAIL") << " residual ∈ [" << render_sci(residual.lower(), 3, MPFR_RNDD) << ", "
            << render_sci(residual.upper(), 3, MPFR_RNDU) << "]  I_" << n << " = " << render_sci(I.mid(), 12, MPFR_RNDN)
            << " ± " << render_radius(I.rad()) << " (" << oracle << ")\n";
  return pass ? kOk : kVerificationFailed;
}

int cmd_exclude(std::uint32_t n, long max_bits) {
  auto cache = open_cache();
  const ExclusionRecord r = check_corollary6(n, make_source(cache.get(), frac_options(max_bits)));
  switch (r.verdict) {
    case Verdict::kHolds:
      std::cout << r.statement << '\n';
      return kOk;
    case Verdict::kFails:
      std::cout << "{log S_" << n << "} = " << r.frac->truncated << "... < 2^-" << n << "; no exclusion from index "
                << n << '\n';
      return kOk;
    case Verdict::kUndecided:
      break;
  }
  std::cerr << "undecided: {log S_" << n << "} could not be separated from 2^-" << n
            << " within the precision limits\n";
  return kUndecided;
}

int cmd_trend(std::uint32_t n_max) {
  const TrendReport report = trend_corollary7(n_max);
  std::cout << "n,scaled,radius,target\n";
  const std::string target = render_fixed(report.target.mid(), 12, DecimalRounding::kHalfEven);
  for (const auto& p : report.points)
    std::cout << p.n << ',' << render_fixed(p.scaled.mid(), 12, DecimalRounding::kHalfEven) << ','
              << render_radius(p.scaled.rad()) << ',' << target << '\n';
  return kOk;
}

struct SurveyArgs {
  std::uint32_t from = 1;
  std::uint32_t to = 1;
  long digits = 6;
  std::string out;
  bool resume = false;
  bool migrate = false;
  unsigned threads = 0;
  std::uint32_t chunk = 16;
  std::uint32_t max_rows = 0;
  long max_bits = 0;
};

int cmd_survey(const SurveyArgs& args) {
  if (args.from > args.to) throw UsageError("--from must not exceed --to");
  const fs::path csv = args.out;

  SurveyCheckpoint ckpt;
  ckpt.n_from = args.from;
  ckpt.digits = args.digits;
  std::optional<SurveyCheckpoint> previous;
  if (args.resume) {
    try {
      previous = SurveyCheckpoint::load(csv);
    } catch (const std::invalid_argument& e) {
      throw UsageError("unreadable checkpoint " + SurveyCheckpoint::path_for(csv).string() + ": " + e.what());
    }
    if (!previous && fs::exists(csv)) throw UsageError("no checkpoint for " + csv.string() + "; cannot resume");
  }
  if (previous) {
    if (previous->tool_version != kToolVersion && !args.migrate)
      throw UsageError("checkpoint written by " + previous->tool_version + ", this is " + std::string(kToolVersion) +
                       "; pass --migrate to continue it");
    if (previous->n_from != args.from || previous->digits != args.digits)
      throw UsageError("checkpoint is for --from " + std::to_string(previous->n_from) + " --digits " +
                       std::to_string(previous->digits));
    if (!fs::exists(csv) || fs::file_size(csv) < previous->csv_bytes)
      throw UsageError(csv.string() + " is shorter than its checkpoint records");
    ckpt = *previous;
    ckpt.tool_version = std::string(kToolVersion);
    fs::resize_file(csv, ckpt.csv_bytes);
  } else {
    std::ofstream out(csv, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + csv.string());
    out << survey_csv_header() << '\n';
    out.flush();
    ckpt.csv_bytes = static_cast<std::uint64_t>(out.tellp());
  }
  ckpt.save(csv);

  auto cache = open_cache();
  const FracSource source = make_source(cache.get(), frac_options(args.max_bits));
  SurveyAccumulator acc{ckpt.frac_sum, ckpt.frac_count};
  std::ofstream out(csv, std::ios::binary | std::ios::app);
  std::uint32_t undecided = 0;
  std::uint32_t written = 0;
  std::uint64_t next = static_cast<std::uint64_t>(args.from) + ckpt.rows_done;
  while (next <= args.to) {
    if (args.max_rows != 0 && written >= args.max_rows) {
      std::cout << "stopped after " << written << " rows at n = " << next - 1 << "; continue with --resume\n";
      return kOk;
    }
    std::uint64_t last = std::min<std::uint64_t>(args.to, next + args.chunk - 1);
    if (args.max_rows != 0) last = std::min<std::uint64_t>(last, next + (args.max_rows - written) - 1);
    auto rows = survey(static_cast<std::uint32_t>(next), static_cast<std::uint32_t>(last), args.digits, source,
                       args.threads);
    for (auto& row : rows) {
      acc.add(row);
      if (!row.decided()) ++undecided;
      out << survey_csv_line(row, args.digits) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write to " + csv.string() + " failed");
    written += static_cast<std::uint32_t>(rows.size());
    ckpt.rows_done += static_cast<std::uint32_t>(rows.size());
    ckpt.csv_bytes = static_cast<std::uint64_t>(out.tellp());
    ckpt.frac_sum = acc.sum;
    ckpt.frac_count = acc.count;
    ckpt.save(csv);
    next = last + 1;
  }
  std::cout << "rows " << args.from << ".." << args.to << " in " << csv.string();
  if (acc.count > 0) {
    BigRational average = acc.sum / acc.count;
    std::cout << "; cumulative average " << render_fixed(average, args.digits, DecimalRounding::kHalfEven);
  }
  std::cout << '\n';
  if (undecided > 0) {
    std::cerr << undecided << " row(s) undecided in this run\n";
    return kUndecided;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified computations around the Euler constant and log S_n"};
  app.require_subcommand(1);
  const auto index = CLI::Range(std::uint32_t{1}, kMaxIndex);
  const auto positive_digits = CLI::Range(1L, 1L << 20);

  std::uint32_t n = 1;
  long digits = 6;
  long max_bits = 0;
  std::string format = "factored";
  std::string oracle = "quad";
  bool show_enclosure = false;
  SurveyArgs survey_args;

  auto* dn = app.add_subcommand("dn", "Print d_n = lcm(1..n)");
  dn->add_option("n", n)->required()->check(index);

  auto* sn = app.add_subcommand("sn", "Print S_n factored, grouped as s_n^(2r_n), or its decimal digit count");
  sn->add_option("n", n)->required()->check(index);
  sn->add_option("format", format, "factored | grouped | digits-count")
      ->check(CLI::IsMember({"factored", "grouped", "digits-count"}));

  auto* frac = app.add_subcommand("frac", "Print certified truncated digits of {log S_n}");
  frac->add_option("n", n)->required()->check(index);
  frac->add_option("--digits", digits)->check(positive_digits);
  frac->add_option("--max-bits", max_bits, "Precision cap in bits")->check(CLI::Range(2L, 1L << 30));
  frac->add_flag("--enclosure", show_enclosure, "Also print the underlying enclosure");

  auto* gamma = app.add_subcommand("gamma", "Print the approximation (A_n - L_n) / C(2n,n) of gamma");
  gamma->add_option("--n", n)->required()->check(index);
  gamma->add_option("--digits", digits)->check(positive_digits);

  auto* verify = app.add_subcommand("verify", "Check the I_n identity against an analytic oracle");
  verify->add_option("n", n)->required()->check(CLI::Range(1u, 12u));
  verify->add_option("--oracle", oracle)->check(CLI::IsMember({"quad", "series"}));

  auto* exclude = app.add_subcommand("exclude", "Decide {log S_n} >= 2^-n and print the resulting statement");
  exclude->add_option("n", n)->required()->check(index);
  exclude->add_option("--max-bits", max_bits, "Precision cap in bits")->check(CLI::Range(2L, 1L << 30));

  std::uint32_t n_max = 20;
  auto* trend = app.add_subcommand("trend", "CSV of 4^(2n) n I_n against its limit");
  trend->add_option("--n-max", n_max)->check(CLI::Range(1u, 2000u));

  auto* sv = app.add_subcommand("survey", "Resumable survey of {log S_n} over a range of n, as CSV");
  sv->add_option("--from", survey_args.from)->required()->check(index);
  sv->add_option("--to", survey_args.to)->required()->check(index);
  sv->add_option("--digits", survey_args.digits)->check(positive_digits);
  sv->add_option("--out", survey_args.out)->required();
  sv->add_flag("--resume", survey_args.resume, "Continue from the checkpoint next to --out");
  sv->add_flag("--migrate", survey_args.migrate, "Accept a checkpoint written by another tool version");
  sv->add_option("--threads", survey_args.threads, "Worker threads (0 = all cores)");
  sv->add_option("--chunk", survey_args.chunk, "Rows per checkpoint")->check(CLI::Range(1u, 100000u));
  sv->add_option("--max-rows", survey_args.max_rows, "Stop after this many rows (0 = no limit)");
  sv->add_option("--max-bits", survey_args.max_bits, "Precision cap in bits")->check(CLI::Range(2L, 1L << 30));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*dn) return cmd_dn(n);
    if (*sn) return cmd_sn(n, format);
    if (*frac) return cmd_frac(n, digits, max_bits, show_enclosure);
    if (*gamma) return cmd_gamma(n, digits);
    if (*verify) return cmd_verify(n, oracle);
    if (*exclude) return cmd_exclude(n, max_bits);
    if (*trend) return cmd_trend(n_max);
    if (*sv) return cmd_survey(survey_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PrecisionCapError& e) {
    std::cerr << "precision cap: " << e.what() << '\n';
    return kPrecisionCap;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature did not converge: " << e.what() << '\n';
    return kPrecisionCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsage;
}
