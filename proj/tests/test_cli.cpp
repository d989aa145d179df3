// Runs the command-line tool and compares its output with direct library
// calls through the C API.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "boltzsyn/boltzsyn.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("boltzsyn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Standard output only; standard error goes to err.txt in the work dir.
Run run(const std::string& args) {
  const std::string cmd =
      std::string(BOLTZSYN_CLI) + " " + args + " 2>" + path("err.txt");
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  bsyn_string_free(s);
  return out;
}

std::string dist_file(const std::string& name, int n, const std::vector<double>& probs) {
  write(path(name), json{{"schema", "dist/1"}, {"n", n}, {"probs", probs}}.dump());
  return path(name);
}

std::vector<double> random_probs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(std::size_t{1} << n);
  double total = 0.0;
  for (auto& x : p) total += (x = e(rng) + 1e-3);
  for (auto& x : p) x /= total;
  return p;
}

std::string value_after(const std::string& text, const std::string& key) {
  std::istringstream ss(text);
  std::string k, v;
  while (ss >> k >> v)
    if (k == key) return v;
  return "";
}

}  // namespace

TEST_CASE("pair-cover") {
  const auto full = dist_file("full4.json", 4, std::vector<double>(16, 1.0 / 16));
  auto r = run("pair-cover --dist " + full);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("k") == 8);

  write(path("single.json"), R"({"schema":"support/1","n":4,"states":[5]})");
  r = run("pair-cover --support " + path("single.json"));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("k") == 1);

  write(path("rand_support.json"), R"({"schema":"support/1","n":5,"states":[0,3,7,9,12,17,30,31]})");
  r = run("pair-cover --support " + path("rand_support.json"));
  bsyn_dist* d = nullptr;
  REQUIRE(bsyn_support_load(path("rand_support.json").c_str(), &d) == BSYN_OK);
  bsyn_cover* c = nullptr;
  REQUIRE(bsyn_pair_cover(d, &c) == BSYN_OK);
  char* js = nullptr;
  REQUIRE(bsyn_cover_to_json(c, &js) == BSYN_OK);
  CHECK(r.out == take(js) + "\n");
  bsyn_cover_free(c);
  bsyn_dist_free(d);

  write(path("bad.json"), "{not json");
  CHECK(run("pair-cover --dist " + path("bad.json")).code == 2);
  CHECK(slurp(path("err.txt")).find("malformed") != std::string::npos);
  write(path("empty.json"), R"({"schema":"support/1","n":3,"states":[]})");
  CHECK(run("pair-cover --support " + path("empty.json")).code == 3);
  CHECK(run("pair-cover").code == 2);
}

TEST_CASE("synth-rbm") {
  const auto two = dist_file("two.json", 3, {0, 0, 0, 0.3, 0, 0, 0, 0.7});
  auto r = run("synth-rbm --target " + two + " --sharpness 20 --out " + path("two_model.json"));
  CHECK(r.code == 0);
  CHECK(value_after(r.out, "hidden_units") == "0");

  const auto t4 = dist_file("t4.json", 4, random_probs(4, 42));
  const auto model = path("m4.json");
  r = run("synth-rbm --target " + t4 + " --sharpness 69.1 --out " + model);
  CHECK(r.code == 0);
  CHECK(value_after(r.out, "hidden_units") == "7");
  const auto report = json::parse(slurp(model + ".report.json"));
  CHECK(report.at("kl").get<double>() <= 1e-4);
  CHECK(std::stod(value_after(r.out, "kl")) == report.at("kl").get<double>());

  const auto first = slurp(model);
  REQUIRE(run("synth-rbm --target " + t4 + " --sharpness 69.1 --out " + model).code == 0);
  CHECK(slurp(model) == first);

  // Same model through the library.
  bsyn_dist* target = nullptr;
  REQUIRE(bsyn_dist_load(t4.c_str(), &target) == BSYN_OK);
  bsyn_rbm_options opts;
  bsyn_rbm_options_default(&opts);
  opts.sharpness = 69.1;
  bsyn_model* m = nullptr;
  char* rep = nullptr;
  REQUIRE(bsyn_synth_rbm(target, nullptr, &opts, &m, &rep) == BSYN_OK);
  bsyn_string_free(rep);
  char* js = nullptr;
  REQUIRE(bsyn_model_to_json(m, &js) == BSYN_OK);
  CHECK(first == take(js) + "\n");
  bsyn_model_free(m);
  bsyn_dist_free(target);

  const auto manifest = json::parse(slurp(model + ".manifest.json"));
  CHECK(manifest.at("command") == "synth-rbm");
  CHECK(manifest.at("inputs").size() == 1);
  CHECK(manifest.at("output").at("sha256").get<std::string>().size() == 64);
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("wall_clock_seconds"));

  const auto sparse = dist_file("sparse.json", 3, {0.5, 0, 0, 0.25, 0, 0, 0.25, 0});
  r = run("synth-rbm --target " + sparse + " --sharpness 1 --out " + path("fail.json"));
  CHECK(r.code == 4);
  CHECK(slurp(path("err.txt")).find("residuals") != std::string::npos);
  CHECK_FALSE(fs::exists(path("fail.json")));
}

TEST_CASE("synth-dbn") {
  const auto t4 = dist_file("d4.json", 4, random_probs(4, 7));
  auto r = run("synth-dbn --target " + t4 + " --b 2 --copy-sharpness 40 --out " +
               path("dbn4.json") + " --trace " + path("trace.csv"));
  CHECK(r.code == 0);
  CHECK(value_after(r.out, "layers") == "4");
  CHECK(json::parse(slurp(path("dbn4.json.report.json"))).at("layers") == 4);
  CHECK(slurp(path("trace.csv")).rfind("row,state,mass_before,mass_after\n", 0) == 0);
  CHECK(fs::exists(path("trace.csv.manifest.json")));

  std::vector<double> point(4, 0.0);
  point[2] = 1.0;
  r = run("synth-dbn --target " + dist_file("p2.json", 2, point) + " --b 1 --out " +
          path("dbn2.json"));
  CHECK(r.code == 0);
  CHECK(std::stod(value_after(r.out, "tv")) <= 1e-6);

  r = run("synth-dbn --target " + dist_file("n5.json", 5, random_probs(5, 1)) + " --b 2 --out " +
          path("dbn5.json"));
  CHECK(r.code == 5);
  CHECK(slurp(path("err.txt")).find("2 4 7 12 21") != std::string::npos);
}

TEST_CASE("eval") {
  write(path("zero.json"),
        R"({"schema":"rbm/1","n_visible":2,"n_hidden":1,"W":{"rows":1,"cols":2,"layout":"row-major","data":[0,0]},"B":[0,0],"C":[0]})");
  auto r = run("eval --model " + path("zero.json"));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("probs") == json::array({0.25, 0.25, 0.25, 0.25}));

  const auto t4 = dist_file("e4.json", 4, random_probs(4, 99));
  REQUIRE(run("synth-rbm --target " + t4 + " --out " + path("e4_model.json")).code == 0);
  r = run("eval --model " + path("e4_model.json") + " --out " + path("e4_marginal.json"));
  CHECK(r.code == 0);
  CHECK(fs::exists(path("e4_marginal.json.manifest.json")));
  bsyn_dist* p = nullptr;
  bsyn_dist* q = nullptr;
  REQUIRE(bsyn_dist_load(t4.c_str(), &p) == BSYN_OK);
  REQUIRE(bsyn_dist_load(path("e4_marginal.json").c_str(), &q) == BSYN_OK);
  double kl = 0.0;
  REQUIRE(bsyn_kl_divergence(p, q, &kl) == BSYN_OK);
  const double reported =
      json::parse(slurp(path("e4_model.json.report.json"))).at("kl").get<double>();
  CHECK(std::abs(kl - reported) <= 1e-12);
  bsyn_dist_free(p);
  bsyn_dist_free(q);

  const auto a = run("eval --model " + path("e4_model.json") + " --samples 1000 --seed 5");
  const auto b = run("eval --model " + path("e4_model.json") + " --samples 1000 --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("sample,state,state_bits\n", 0) == 0);
  bsyn_model* m = nullptr;
  REQUIRE(bsyn_model_load(path("e4_model.json").c_str(), &m) == BSYN_OK);
  char* csv = nullptr;
  REQUIRE(bsyn_model_samples_csv(m, 1000, 5, &csv) == BSYN_OK);
  CHECK(a.out == take(csv));
  bsyn_model_free(m);

  REQUIRE(run("eval --model " + path("e4_model.json") + " --samples 10 --out " +
              path("samples.csv")).code == 0);
  const auto manifest = json::parse(slurp(path("samples.csv.manifest.json")));
  CHECK(manifest.at("seed") == 1);
  CHECK(manifest.at("sampler") == bsyn_sampler_name());

  CHECK(run("eval --model " + t4).code == 2);
}

TEST_CASE("bounds") {
  auto r = run("bounds --n-range 4..4 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("\n4,16,2,7,17,40,39,4,84,4,84,1,11/20\n") != std::string::npos);
  char* lib = nullptr;
  REQUIRE(bsyn_bounds_table(4, 4, 0, -1, 1, &lib) == BSYN_OK);
  CHECK(r.out == take(lib));

  r = run("bounds --n-range 2..2");
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 2);

  const auto text = run("bounds --n-range 1..30").out;
  const auto csv = run("bounds --n-range 1..30 --format csv").out;
  std::istringstream ts(text), cs(csv);
  std::string tl, cl;
  while (std::getline(cs, cl)) {
    REQUIRE(std::getline(ts, tl));
    std::istringstream tw(tl);
    std::string word, joined;
    while (tw >> word) joined += (joined.empty() ? "" : ",") + word;
    CHECK(joined == cl);
  }
  CHECK(run("bounds --n-range 1..65").code == 2);
  CHECK(run("bounds --n-range x").code == 2);
}

TEST_CASE("gray") {
  auto r = run("gray --b 1");
  CHECK(r.code == 0);
  CHECK(r.out == "sequence,row,state_bits,flipped_coordinate\n0,1,00,2\n0,2,01,\n1,1,10,2\n1,2,11,\n");
  r = run("gray --b 3 --verify");
  CHECK(r.code == 0);
  CHECK(slurp(path("err.txt")).find("partition: pass") != std::string::npos);
  bsyn_family* f = nullptr;
  REQUIRE(bsyn_family_build(3, &f) == BSYN_OK);
  char* csv = nullptr;
  REQUIRE(bsyn_family_to_csv(f, &csv) == BSYN_OK);
  CHECK(r.out == take(csv));
  bsyn_family_free(f);
  CHECK(run("gray --b 6").code == 2);
}
