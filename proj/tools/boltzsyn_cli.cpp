// boltzsyn command-line tool. Every command is a thin shell over one call
// into the C API.
//
// Exit codes: 0 ok, 2 bad input, 3 degenerate input, 4 numeric failure,
// 5 domain restriction.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "boltzsyn/boltzsyn.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitDomain = 5;

constexpr std::uint64_t kDefaultSeed = 1;

int exit_code(bsyn_status s) {
  switch (s) {
    case BSYN_OK: return kExitOk;
    case BSYN_ERR_DEGENERATE: return kExitDegenerate;
    case BSYN_ERR_CALIBRATION: return kExitNumeric;
    case BSYN_ERR_DOMAIN: return kExitDomain;
    case BSYN_ERR_INTERNAL: return 1;
    default: return kExitInput;
  }
}

struct Failure {
  int code;
};

void check(bsyn_status s, const char* what) {
  if (s == BSYN_OK) return;
  std::cerr << "boltzsyn: " << what << ": " << bsyn_last_error() << '\n';
  throw Failure{exit_code(s)};
}

struct StringDeleter {
  void operator()(char* s) const { bsyn_string_free(s); }
};
struct DistDeleter {
  void operator()(bsyn_dist* d) const { bsyn_dist_free(d); }
};
struct CoverDeleter {
  void operator()(bsyn_cover* c) const { bsyn_cover_free(c); }
};
struct ModelDeleter {
  void operator()(bsyn_model* m) const { bsyn_model_free(m); }
};
struct FamilyDeleter {
  void operator()(bsyn_family* f) const { bsyn_family_free(f); }
};

using String = std::unique_ptr<char, StringDeleter>;
using Dist = std::unique_ptr<bsyn_dist, DistDeleter>;
using Cover = std::unique_ptr<bsyn_cover, CoverDeleter>;
using Model = std::unique_ptr<bsyn_model, ModelDeleter>;
using Family = std::unique_ptr<bsyn_family, FamilyDeleter>;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i)
    ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "boltzsyn: cannot write '" << path << "'\n";
    throw Failure{kExitInput};
  }
}

// Run metadata written next to every output file as <file>.manifest.json.
struct Manifest {
  std::string command;
  std::vector<std::string> arguments;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write_for(const std::string& output) const {
    nlohmann::json in = nlohmann::json::array();
    for (const auto& p : inputs) in.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json j{{"schema", "manifest/1"},
                     {"command", command},
                     {"arguments", arguments},
                     {"inputs", in},
                     {"output", {{"path", output}, {"sha256", sha256_file(output)}}},
                     {"tool_version", bsyn_version()},
                     {"wall_clock_seconds", seconds}};
    if (seed) {
      j["seed"] = *seed;
      j["sampler"] = bsyn_sampler_name();
    }
    write_text(output + ".manifest.json", j.dump(2) + "\n");
  }
};

std::string num(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

int cmd_pair_cover(const std::string& dist_path, const std::string& support_path) {
  bsyn_dist* raw = nullptr;
  if (!dist_path.empty())
    check(bsyn_dist_load(dist_path.c_str(), &raw), "reading distribution");
  else
    check(bsyn_support_load(support_path.c_str(), &raw), "reading support");
  Dist d(raw);
  bsyn_cover* cover = nullptr;
  check(bsyn_pair_cover(d.get(), &cover), "pair cover");
  Cover c(cover);
  char* json = nullptr;
  check(bsyn_cover_to_json(c.get(), &json), "pair cover");
  String s(json);
  std::cout << s.get() << '\n';
  return kExitOk;
}

int cmd_synth_rbm(const std::string& target_path, double sharpness, bool no_calibrate,
                  const std::string& out, std::string report_path, Manifest manifest) {
  bsyn_dist* raw = nullptr;
  check(bsyn_dist_load(target_path.c_str(), &raw), "reading target");
  Dist target(raw);
  manifest.inputs.push_back(target_path);

  bsyn_rbm_options opts;
  bsyn_rbm_options_default(&opts);
  opts.sharpness = sharpness;
  opts.calibrate = no_calibrate ? 0 : 1;

  if (report_path.empty()) report_path = out + ".report.json";
  bsyn_model* model = nullptr;
  char* report = nullptr;
  const bsyn_status st = bsyn_synth_rbm(target.get(), nullptr, &opts, &model, &report);
  String report_s(report);
  Model m(model);
  if (st == BSYN_ERR_CALIBRATION && report_s) {
    std::cerr << "boltzsyn: synth-rbm: " << bsyn_last_error() << '\n';
    std::cerr << "residuals: " << report_s.get() << '\n';
    write_text(report_path, std::string(report_s.get()) + "\n");
    throw Failure{kExitNumeric};
  }
  check(st, "synth-rbm");
  check(bsyn_model_save(m.get(), out.c_str()), "writing model");
  write_text(report_path, std::string(report_s.get()) + "\n");
  manifest.write_for(out);
  manifest.write_for(report_path);

  const auto r = nlohmann::json::parse(report_s.get());
  std::cout << "hidden_units " << bsyn_model_hidden_units(m.get()) << '\n';
  std::cout << "kl " << num(r.at("kl").get<double>()) << '\n';
  return kExitOk;
}

int cmd_synth_dbn(const std::string& target_path, int b, double copy_sharpness,
                  double top_sharpness, const std::string& out, std::string report_path,
                  const std::string& trace_path, Manifest manifest) {
  bsyn_dist* raw = nullptr;
  check(bsyn_dist_load(target_path.c_str(), &raw), "reading target");
  Dist target(raw);
  manifest.inputs.push_back(target_path);

  bsyn_model* model = nullptr;
  char* report = nullptr;
  char* trace = nullptr;
  const bsyn_status st = bsyn_synth_dbn(target.get(), b, copy_sharpness, top_sharpness, &model,
                                        &report, trace_path.empty() ? nullptr : &trace);
  String report_s(report);
  String trace_s(trace);
  Model m(model);
  if (st == BSYN_ERR_DOMAIN) {
    int widths[16];
    const auto count = bsyn_admissible_widths(widths, 16);
    std::cerr << "boltzsyn: synth-dbn: " << bsyn_last_error() << '\n';
    std::cerr << "admissible n:";
    for (std::size_t i = 0; i < count; ++i) std::cerr << ' ' << widths[i];
    std::cerr << '\n';
    throw Failure{kExitDomain};
  }
  check(st, "synth-dbn");
  if (report_path.empty()) report_path = out + ".report.json";
  check(bsyn_model_save(m.get(), out.c_str()), "writing model");
  write_text(report_path, std::string(report_s.get()) + "\n");
  manifest.write_for(out);
  manifest.write_for(report_path);
  if (!trace_path.empty()) {
    write_text(trace_path, trace_s.get());
    manifest.write_for(trace_path);
  }

  const auto r = nlohmann::json::parse(report_s.get());
  std::cout << "layers " << r.at("layers").get<int>() << '\n';
  std::cout << "tv " << num(r.at("tv").get<double>()) << '\n';
  std::cout << "kl " << num(r.at("kl").get<double>()) << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& model_path, std::uint64_t samples, std::uint64_t seed,
             const std::string& out, Manifest manifest) {
  bsyn_model* raw = nullptr;
  check(bsyn_model_load(model_path.c_str(), &raw), "reading model");
  Model m(raw);
  manifest.inputs.push_back(model_path);

  std::string text;
  if (samples > 0) {
    manifest.seed = seed;
    char* csv = nullptr;
    check(bsyn_model_samples_csv(m.get(), samples, seed, &csv), "sampling");
    text = String(csv).get();
  } else {
    bsyn_dist* d = nullptr;
    check(bsyn_model_marginal(m.get(), &d), "exact marginal");
    Dist dist(d);
    char* json = nullptr;
    check(bsyn_dist_to_json(dist.get(), &json), "exact marginal");
    text = std::string(String(json).get()) + "\n";
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
    manifest.write_for(out);
  }
  return kExitOk;
}

int cmd_bounds(const std::string& range, int b, std::int64_t s, const std::string& format) {
  int lo = 0, hi = 0;
  const auto dots = range.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(range);
    } else {
      lo = std::stoi(range.substr(0, dots));
      hi = std::stoi(range.substr(dots + 2));
    }
  } catch (const std::exception&) {
    std::cerr << "boltzsyn: bounds: --n-range must look like LO..HI\n";
    throw Failure{kExitInput};
  }
  char* table = nullptr;
  check(bsyn_bounds_table(lo, hi, b, s, format == "csv" ? 1 : 0, &table), "bounds");
  std::cout << String(table).get();
  return kExitOk;
}

int cmd_gray(int b, bool verify) {
  bsyn_family* raw = nullptr;
  check(bsyn_family_build(b, &raw), "gray");
  Family f(raw);
  char* csv = nullptr;
  check(bsyn_family_to_csv(f.get(), &csv), "gray");
  std::cout << String(csv).get();
  if (!verify) return kExitOk;
  int passed = 0;
  char* report = nullptr;
  check(bsyn_family_verify(f.get(), &passed, &report), "gray verify");
  std::cerr << String(report).get();
  return passed ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and exact verification of RBM/DBN universal approximators"};
  app.require_subcommand(1);

  Manifest manifest;
  for (int i = 1; i < argc; ++i) manifest.arguments.emplace_back(argv[i]);

  std::string dist_path, support_path;
  auto* pc = app.add_subcommand("pair-cover", "Minimal Hamming-1 pair cover of a support");
  auto* pc_dist = pc->add_option("--dist", dist_path, "dist/1 file");
  auto* pc_support = pc->add_option("--support", support_path, "support/1 file");
  pc_dist->excludes(pc_support);
  pc->require_option(1);

  std::string target, out, report, trace;
  double sharpness = 30.0 * std::log(10.0);
  bool no_calibrate = false;
  auto* srbm = app.add_subcommand("synth-rbm", "Build an RBM with k-1 hidden units for a target");
  srbm->add_option("--target", target, "dist/1 target")->required();
  srbm->add_option("--sharpness", sharpness, "base sharpness a")->capture_default_str();
  srbm->add_flag("--no-calibrate", no_calibrate, "keep the closed-form pair boosts");
  srbm->add_option("--out", out, "rbm/1 model output")->required();
  srbm->add_option("--report", report, "report path (default <out>.report.json)");

  int b = 0;
  double copy_sharpness = 40.0;
  auto* sdbn = app.add_subcommand("synth-dbn", "Build the width-n DBN for a target");
  sdbn->add_option("--target", target, "dist/1 target")->required();
  sdbn->add_option("--b", b, "prefix width; n must equal 2^(b-1)+b")->required();
  sdbn->add_option("--copy-sharpness", copy_sharpness, "copy sharpness T")->capture_default_str();
  sdbn->add_option("--sharpness", sharpness, "top RBM sharpness a")->capture_default_str();
  sdbn->add_option("--out", out, "dbn/1 model output")->required();
  sdbn->add_option("--report", report, "report path (default <out>.report.json)");
  sdbn->add_option("--trace", trace, "per-layer schedule trace CSV");

  std::string model_path;
  std::uint64_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  auto* ev = app.add_subcommand("eval", "Exact marginal or ancestral samples of a model");
  ev->add_option("--model", model_path, "rbm/1 or dbn/1 file")->required();
  ev->add_option("--samples", samples, "number of ancestral samples");
  ev->add_option("--seed", seed, "sampler seed")->capture_default_str();
  ev->add_option("--out", out, "write here instead of standard output");

  std::string range, format = "text";
  int bounds_b = 0;
  std::int64_t support_size = -1;
  auto* bd = app.add_subcommand("bounds", "Size and parameter-count table");
  bd->add_option("--n-range", range, "LO..HI")->required();
  bd->add_option("--b", bounds_b, "prefix width for the DBN entries (default: inferred)");
  bd->add_option("--s", support_size, "support size s (default 2^n)");
  bd->add_option("--format", format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  bool verify = false;
  int gray_b = 0;
  auto* gr = app.add_subcommand("gray", "Dump the prefix-tagged Gray sequence family");
  gr->add_option("--b", gray_b, "prefix width 1..5")->required();
  gr->add_flag("--verify", verify, "exhaustively check the family properties");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (pc->parsed()) return cmd_pair_cover(dist_path, support_path);
    if (srbm->parsed()) {
      manifest.command = "synth-rbm";
      return cmd_synth_rbm(target, sharpness, no_calibrate, out, report, manifest);
    }
    if (sdbn->parsed()) {
      manifest.command = "synth-dbn";
      return cmd_synth_dbn(target, b, copy_sharpness, sharpness, out, report, trace, manifest);
    }
    if (ev->parsed()) {
      manifest.command = "eval";
      return cmd_eval(model_path, samples, seed, out, manifest);
    }
    if (bd->parsed()) return cmd_bounds(range, bounds_b, support_size, format);
    if (gr->parsed()) return cmd_gray(gray_b, verify);
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitInput;
}
