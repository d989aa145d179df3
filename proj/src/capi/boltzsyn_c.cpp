// extern "C" surface over the boltzsyn C++ core.

#include "boltzsyn/boltzsyn.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "boltzsyn/bounds.hpp"
#include "boltzsyn/dbn_synthesis.hpp"
#include "boltzsyn/gray.hpp"
#include "boltzsyn/inference.hpp"
#include "boltzsyn/pair_cover.hpp"
#include "boltzsyn/rbm_synthesis.hpp"
#include "boltzsyn/serialize.hpp"
#include "json.hpp"

struct bsyn_dist {
  boltzsyn::DiscreteDistribution value;
};
struct bsyn_cover {
  boltzsyn::PairCover value;
};
struct bsyn_model {
  boltzsyn::AnyModel value;
};
struct bsyn_family {
  boltzsyn::SequenceFamily value;
};

namespace {

thread_local std::string g_last_error;

bsyn_status status_for(boltzsyn::ErrorKind kind) {
  using boltzsyn::ErrorKind;
  switch (kind) {
    case ErrorKind::Argument: return BSYN_ERR_ARGUMENT;
    case ErrorKind::Dimension: return BSYN_ERR_DIMENSION;
    case ErrorKind::Size: return BSYN_ERR_SIZE;
    case ErrorKind::Degenerate: return BSYN_ERR_DEGENERATE;
    case ErrorKind::Calibration: return BSYN_ERR_CALIBRATION;
    case ErrorKind::Schema: return BSYN_ERR_SCHEMA;
    case ErrorKind::Domain: return BSYN_ERR_DOMAIN;
    case ErrorKind::Io: return BSYN_ERR_IO;
  }
  return BSYN_ERR_INTERNAL;
}

template <typename F>
bsyn_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return BSYN_OK;
  } catch (const boltzsyn::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BSYN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BSYN_ERR_INTERNAL;
  }
}

void require_ptr(const void* p, const char* name) {
  boltzsyn::require(p != nullptr, boltzsyn::ErrorKind::Argument,
                    std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const boltzsyn::DbnModel as_dbn(const boltzsyn::AnyModel& m) {
  if (const auto* dbn = std::get_if<boltzsyn::DbnModel>(&m)) return *dbn;
  boltzsyn::DbnModel out;
  out.top = std::get<boltzsyn::RbmModel>(m);
  return out;
}

}  // namespace

extern "C" {

const char* bsyn_version(void) { return "1.0.0"; }
const char* bsyn_last_error(void) { return g_last_error.c_str(); }
void bsyn_string_free(char* s) { std::free(s); }

bsyn_status bsyn_dist_create(int n, const double* probs, size_t count, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(probs, "probs");
    require_ptr(out, "out");
    *out = new bsyn_dist{
        boltzsyn::DiscreteDistribution(n, std::vector<double>(probs, probs + count))};
  });
}

bsyn_status bsyn_dist_parse(const char* json, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(json, "json");
    require_ptr(out, "out");
    *out = new bsyn_dist{boltzsyn::dist_from_json(json)};
  });
}

bsyn_status bsyn_dist_load(const char* path, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new bsyn_dist{boltzsyn::dist_from_json(boltzsyn::read_file(path))};
  });
}

bsyn_status bsyn_support_load(const char* path, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new bsyn_dist{boltzsyn::support_from_json(boltzsyn::read_file(path))};
  });
}

bsyn_status bsyn_dist_normalize(const bsyn_dist* d, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(d, "d");
    require_ptr(out, "out");
    *out = new bsyn_dist{boltzsyn::normalize(d->value)};
  });
}

int bsyn_dist_width(const bsyn_dist* d) { return d ? d->value.n() : 0; }

bsyn_status bsyn_dist_probs(const bsyn_dist* d, const double** probs, size_t* count) {
  return guarded([&] {
    require_ptr(d, "d");
    require_ptr(probs, "probs");
    require_ptr(count, "count");
    *probs = d->value.probs().data();
    *count = d->value.size();
  });
}

bsyn_status bsyn_dist_to_json(const bsyn_dist* d, char** out) {
  return guarded([&] {
    require_ptr(d, "d");
    require_ptr(out, "out");
    *out = dup_string(boltzsyn::dist_to_json(d->value));
  });
}

bsyn_status bsyn_kl_divergence(const bsyn_dist* p, const bsyn_dist* q, double* out) {
  return guarded([&] {
    require_ptr(p, "p");
    require_ptr(q, "q");
    require_ptr(out, "out");
    *out = boltzsyn::kl_divergence(p->value, q->value);
  });
}

bsyn_status bsyn_total_variation(const bsyn_dist* p, const bsyn_dist* q, double* out) {
  return guarded([&] {
    require_ptr(p, "p");
    require_ptr(q, "q");
    require_ptr(out, "out");
    *out = boltzsyn::total_variation(p->value, q->value);
  });
}

void bsyn_dist_free(bsyn_dist* d) { delete d; }

bsyn_status bsyn_pair_cover(const bsyn_dist* d, bsyn_cover** out) {
  return guarded([&] {
    require_ptr(d, "d");
    require_ptr(out, "out");
    *out = new bsyn_cover{boltzsyn::minimal_pair_cover(d->value)};
  });
}

int bsyn_cover_k(const bsyn_cover* c) { return c ? c->value.k() : 0; }

bsyn_status bsyn_cover_pair(const bsyn_cover* c, int i, uint32_t* x, uint32_t* y) {
  return guarded([&] {
    require_ptr(c, "c");
    require_ptr(x, "x");
    require_ptr(y, "y");
    boltzsyn::require(i >= 0 && i < c->value.k(), boltzsyn::ErrorKind::Argument,
                      "pair index out of range");
    *x = c->value.pairs[static_cast<std::size_t>(i)].first.index;
    *y = c->value.pairs[static_cast<std::size_t>(i)].second.index;
  });
}

bsyn_status bsyn_cover_to_json(const bsyn_cover* c, char** out) {
  return guarded([&] {
    require_ptr(c, "c");
    require_ptr(out, "out");
    *out = dup_string(boltzsyn::cover_to_json(c->value));
  });
}

void bsyn_cover_free(bsyn_cover* c) { delete c; }

bsyn_status bsyn_model_parse(const char* json, bsyn_model** out) {
  return guarded([&] {
    require_ptr(json, "json");
    require_ptr(out, "out");
    *out = new bsyn_model{boltzsyn::model_from_json(json)};
  });
}

bsyn_status bsyn_model_load(const char* path, bsyn_model** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new bsyn_model{boltzsyn::model_from_json(boltzsyn::read_file(path))};
  });
}

bsyn_model_kind bsyn_model_get_kind(const bsyn_model* m) {
  return m && std::holds_alternative<boltzsyn::DbnModel>(m->value) ? BSYN_MODEL_DBN
                                                                   : BSYN_MODEL_RBM;
}

int bsyn_model_width(const bsyn_model* m) {
  if (!m) return 0;
  if (const auto* dbn = std::get_if<boltzsyn::DbnModel>(&m->value)) return dbn->width();
  return std::get<boltzsyn::RbmModel>(m->value).n_visible;
}

int bsyn_model_hidden_units(const bsyn_model* m) {
  if (!m) return 0;
  if (const auto* dbn = std::get_if<boltzsyn::DbnModel>(&m->value)) return dbn->top.n_hidden();
  return std::get<boltzsyn::RbmModel>(m->value).n_hidden();
}

int bsyn_model_hidden_layers(const bsyn_model* m) {
  if (!m) return 0;
  if (const auto* dbn = std::get_if<boltzsyn::DbnModel>(&m->value))
    return dbn->hidden_layers();
  return 1;
}

bsyn_status bsyn_model_to_json(const bsyn_model* m, char** out) {
  return guarded([&] {
    require_ptr(m, "m");
    require_ptr(out, "out");
    *out = dup_string(boltzsyn::model_to_json(m->value));
  });
}

bsyn_status bsyn_model_save(const bsyn_model* m, const char* path) {
  return guarded([&] {
    require_ptr(m, "m");
    require_ptr(path, "path");
    boltzsyn::write_file(path, boltzsyn::model_to_json(m->value) + "\n");
  });
}

bsyn_status bsyn_model_marginal(const bsyn_model* m, bsyn_dist** out) {
  return guarded([&] {
    require_ptr(m, "m");
    require_ptr(out, "out");
    if (const auto* rbm = std::get_if<boltzsyn::RbmModel>(&m->value))
      *out = new bsyn_dist{boltzsyn::rbm_marginal(*rbm)};
    else
      *out = new bsyn_dist{boltzsyn::dbn_marginal(std::get<boltzsyn::DbnModel>(m->value))};
  });
}

bsyn_status bsyn_model_sample(const bsyn_model* m, uint64_t count, uint64_t seed,
                              uint32_t* states) {
  return guarded([&] {
    require_ptr(m, "m");
    require_ptr(states, "states");
    const auto draws = boltzsyn::ancestral_sample(as_dbn(m->value), count, seed);
    for (std::size_t i = 0; i < draws.size(); ++i) states[i] = draws[i].index;
  });
}

bsyn_status bsyn_model_samples_csv(const bsyn_model* m, uint64_t count, uint64_t seed,
                                   char** out) {
  return guarded([&] {
    require_ptr(m, "m");
    require_ptr(out, "out");
    const auto draws = boltzsyn::ancestral_sample(as_dbn(m->value), count, seed);
    std::ostringstream ss;
    ss << "sample,state,state_bits\n";
    for (std::size_t i = 0; i < draws.size(); ++i)
      ss << i << ',' << draws[i].index << ',' << draws[i].to_string() << '\n';
    *out = dup_string(ss.str());
  });
}

const char* bsyn_sampler_name(void) { return boltzsyn::kSamplerName.data(); }

void bsyn_model_free(bsyn_model* m) { delete m; }

void bsyn_rbm_options_default(bsyn_rbm_options* opts) {
  if (!opts) return;
  const boltzsyn::RbmSynthesisOptions defaults;
  opts->sharpness = defaults.sharpness;
  opts->calibrate = defaults.calibrate ? 1 : 0;
  opts->max_sweeps = defaults.max_sweeps;
  opts->tolerance = defaults.tolerance;
}

bsyn_status bsyn_synth_rbm(const bsyn_dist* target, const bsyn_cover* cover,
                           const bsyn_rbm_options* opts, bsyn_model** model, char** report) {
  return guarded([&] {
    require_ptr(target, "target");
    require_ptr(model, "model");
    require_ptr(report, "report");
    *model = nullptr;
    *report = nullptr;
    boltzsyn::RbmSynthesisOptions o;
    if (opts) {
      o.sharpness = opts->sharpness;
      o.calibrate = opts->calibrate != 0;
      o.max_sweeps = opts->max_sweeps;
      o.tolerance = opts->tolerance;
    }
    const auto target_n = boltzsyn::normalize(target->value);
    const auto c = cover ? cover->value : boltzsyn::minimal_pair_cover(target_n);
    try {
      auto result = boltzsyn::synthesize_rbm(target_n, c, o);
      auto* handle = new bsyn_model{std::move(result.model)};
      try {
        *report = dup_string(boltzsyn::rbm_report_to_json(result.report));
      } catch (...) {
        delete handle;
        throw;
      }
      *model = handle;
    } catch (const boltzsyn::CalibrationError& e) {
      nlohmann::json residuals = nlohmann::json::array();
      for (const auto& r : e.residuals())
        residuals.push_back({{"state", r.state}, {"target", r.target}, {"achieved", r.achieved}});
      *report = dup_string(nlohmann::json{{"error", e.what()}, {"residuals", residuals}}.dump());
      throw;
    }
  });
}

bsyn_status bsyn_synth_dbn(const bsyn_dist* target, int b, double copy_sharpness,
                           double top_sharpness, bsyn_model** model, char** report,
                           char** trace) {
  return guarded([&] {
    require_ptr(target, "target");
    require_ptr(model, "model");
    require_ptr(report, "report");
    *model = nullptr;
    *report = nullptr;
    if (trace) *trace = nullptr;
    boltzsyn::DbnSynthesisOptions o;
    o.copy_sharpness = copy_sharpness;
    o.top_sharpness = top_sharpness;
    auto result = boltzsyn::synthesize_dbn(target->value, b, o);
    std::string trace_csv;
    if (trace) {
      std::vector<boltzsyn::TraceRow> rows;
      boltzsyn::ideal_pushforward(result.schedule, &rows);
      trace_csv = boltzsyn::trace_to_csv(rows);
    }
    const std::string report_json = boltzsyn::dbn_report_to_json(result.report);
    auto* handle = new bsyn_model{std::move(result.model)};
    char* r = nullptr;
    char* t = nullptr;
    try {
      r = dup_string(report_json);
      if (trace) t = dup_string(trace_csv);
    } catch (...) {
      std::free(r);
      delete handle;
      throw;
    }
    *model = handle;
    *report = r;
    if (trace) *trace = t;
  });
}

bsyn_status bsyn_family_build(int b, bsyn_family** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = new bsyn_family{boltzsyn::build_family(b)};
  });
}

int bsyn_family_width(const bsyn_family* f) { return f ? f->value.n : 0; }
int bsyn_family_sequences(const bsyn_family* f) { return f ? f->value.a : 0; }
int bsyn_family_length(const bsyn_family* f) { return f ? f->value.length : 0; }

bsyn_status bsyn_family_entry(const bsyn_family* f, int seq, int row, uint32_t* state) {
  return guarded([&] {
    require_ptr(f, "f");
    require_ptr(state, "state");
    boltzsyn::require(seq >= 0 && seq < f->value.a && row >= 0 && row < f->value.length,
                      boltzsyn::ErrorKind::Argument, "family entry out of range");
    *state = f->value.at(seq, row).index;
  });
}

bsyn_status bsyn_family_to_csv(const bsyn_family* f, char** out) {
  return guarded([&] {
    require_ptr(f, "f");
    require_ptr(out, "out");
    *out = dup_string(boltzsyn::family_to_csv(f->value));
  });
}

bsyn_status bsyn_family_verify(const bsyn_family* f, int* passed, char** report) {
  return guarded([&] {
    require_ptr(f, "f");
    require_ptr(passed, "passed");
    const auto check = boltzsyn::verify_family(f->value);
    *passed = check.all() ? 1 : 0;
    if (report) *report = dup_string(boltzsyn::family_check_report(check));
  });
}

void bsyn_family_free(bsyn_family* f) { delete f; }

size_t bsyn_admissible_widths(int* out, size_t capacity) {
  const auto widths = boltzsyn::admissible_widths();
  for (std::size_t i = 0; out && i < widths.size() && i < capacity; ++i) out[i] = widths[i];
  return widths.size();
}

bsyn_status bsyn_bounds_table(int lo, int hi, int b, int64_t support_size, int csv,
                              char** out) {
  return guarded([&] {
    require_ptr(out, "out");
    boltzsyn::require(lo >= 1 && lo <= hi && hi <= boltzsyn::kMaxFormulaWidth,
                      boltzsyn::ErrorKind::Argument,
                      "n-range must satisfy 1 <= lo <= hi <= " +
                          std::to_string(boltzsyn::kMaxFormulaWidth));
    std::vector<boltzsyn::SizeTable> rows;
    for (int n = lo; n <= hi; ++n) {
      std::optional<boltzsyn::BigInt> s;
      if (support_size >= 0) s = boltzsyn::BigInt(support_size);
      rows.push_back(boltzsyn::size_summary(n, b > 0 ? std::optional<int>(b) : std::nullopt, s));
    }
    *out = dup_string(csv ? boltzsyn::size_tables_csv(rows) : boltzsyn::size_tables_text(rows));
  });
}

}  // extern "C"
