#include "dlpkit.h"

#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "intervals.hpp"
#include "lattice.hpp"
#include "mbf.hpp"
#include "poly.hpp"
#include "reasoner.hpp"
#include "shapes.hpp"
#include "similarity.hpp"
#include "trace.hpp"
#include "viz.hpp"

using namespace dlpkit;

namespace {

thread_local std::string g_last_error;

dlpk_status status_of(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
      return DLPK_ERR_INVALID_ARGUMENT;
    case Errc::parse:
      return DLPK_ERR_PARSE;
    case Errc::io:
      return DLPK_ERR_IO;
    case Errc::inconsistent:
      return DLPK_ERR_INCONSISTENT;
    case Errc::aborted:
      return DLPK_ERR_ABORTED;
    case Errc::not_found:
      return DLPK_ERR_NOT_FOUND;
  }
  return DLPK_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
dlpk_status wrap(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DLPK_ERR_INVALID_ARGUMENT;
  }
}

char* dup_text(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    require(used == text.size(), Errc::parse, std::string("bad ") + what + ": " + text);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse, std::string("bad ") + what + ": " + text);
  }
}

}  // namespace

struct dlpk_chains {
  lattice::ChainCover cover;
};

struct dlpk_restore {
  mbf::RestoreResult result;
  std::string oracle;
};

extern "C" {

const char* dlpk_status_name(dlpk_status status) {
  switch (status) {
    case DLPK_OK:
      return "ok";
    case DLPK_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DLPK_ERR_PARSE:
      return "parse error";
    case DLPK_ERR_IO:
      return "io error";
    case DLPK_ERR_INCONSISTENT:
      return "inconsistent";
    case DLPK_ERR_ABORTED:
      return "aborted";
    case DLPK_ERR_NOT_FOUND:
      return "not found";
  }
  return "unknown";
}

const char* dlpk_last_error(void) { return g_last_error.c_str(); }

void dlpk_text_free(char* text) { delete[] text; }

dlpk_status dlpk_chains_build(int n, dlpk_chains** out) {
  return wrap([&]() {
    require(out != nullptr, Errc::invalid_argument, "output handle is null");
    auto* handle = new dlpk_chains{lattice::hansel_chains(n)};
    *out = handle;
    return DLPK_OK;
  });
}

void dlpk_chains_free(dlpk_chains* chains) { delete chains; }

int dlpk_chains_count(const dlpk_chains* chains) {
  return chains ? static_cast<int>(chains->cover.chains.size()) : 0;
}

int dlpk_chains_length(const dlpk_chains* chains, int index) {
  if (!chains || index < 0 || index >= static_cast<int>(chains->cover.chains.size())) return -1;
  return chains->cover.chains[static_cast<std::size_t>(index)].length();
}

dlpk_status dlpk_chains_text(const dlpk_chains* chains, char** out_text) {
  return wrap([&]() {
    require(chains && out_text, Errc::invalid_argument, "null argument");
    *out_text = dup_text(chains->cover.to_text());
    return DLPK_OK;
  });
}

dlpk_status dlpk_shannon_bound(int n, long long* out) {
  return wrap([&]() {
    require(out != nullptr, Errc::invalid_argument, "output pointer is null");
    *out = mbf::shannon_bound(n);
    return DLPK_OK;
  });
}

dlpk_status dlpk_restore_run(int n, const char* oracle_spec, dlpk_oracle_cb cb, void* user,
                             const char* trace_path, dlpk_restore** out) {
  return wrap([&]() {
    require(oracle_spec && out, Errc::invalid_argument, "null argument");
    std::string spec(oracle_spec);
    mbf::Oracle oracle;
    if (spec.rfind("expr:", 0) == 0) {
      oracle = mbf::expr_oracle(n, spec.substr(5));
    } else if (spec.rfind("table:", 0) == 0) {
      oracle = mbf::table_oracle_from_file(spec.substr(6), n);
    } else if (spec == "callback") {
      require(cb != nullptr, Errc::invalid_argument, "callback oracle needs a callback");
      oracle = mbf::callback_oracle([cb, user](const lattice::BoolVec& v) {
        int answer = cb(v.str().c_str(), user);
        if (answer < 0) fail(Errc::aborted, "oracle aborted at " + v.str());
        return answer;
      });
    } else {
      fail(Errc::invalid_argument,
           "oracle spec must be expr:<formula>, table:<path> or callback; got " + spec);
    }

    trace::Trace partial;
    try {
      mbf::RestoreResult result = mbf::restore(n, oracle, nullptr, &partial);
      if (trace_path) result.trace.save(trace_path);
      *out = new dlpk_restore{std::move(result), spec};
      return DLPK_OK;
    } catch (const Error&) {
      if (trace_path) partial.save(trace_path);
      throw;
    }
  });
}

void dlpk_restore_free(dlpk_restore* r) { delete r; }

long long dlpk_restore_queries(const dlpk_restore* r) {
  return r ? r->result.stats.queries_asked : -1;
}

long long dlpk_restore_bound(const dlpk_restore* r) { return r ? r->result.stats.bound : -1; }

dlpk_status dlpk_restore_summary(const dlpk_restore* r, char** out_text) {
  return wrap([&]() {
    require(r && out_text, Errc::invalid_argument, "null argument");
    mbf::LowerUnits units = mbf::lower_units(r->result.table);
    std::ostringstream out;
    out << "n=" << r->result.table.n << " oracle=" << r->oracle << "\n";
    out << "queries=" << r->result.stats.queries_asked
        << " shannon_bound=" << r->result.stats.bound << "\n";
    out << "per_chain=[";
    for (std::size_t i = 0; i < r->result.stats.per_chain_queries.size(); ++i) {
      if (i) out << ", ";
      out << r->result.stats.per_chain_queries[i];
    }
    out << "]\n";
    out << "lower_units=" << mbf::units_dnf(r->result.table.n, units.units) << "\n";
    out << "smallest_lower_units={";
    for (std::size_t i = 0; i < units.smallest.size(); ++i) {
      if (i) out << ", ";
      out << units.smallest[i].str();
    }
    out << "}\n";
    *out_text = dup_text(out.str());
    return DLPK_OK;
  });
}

dlpk_status dlpk_models_order(const char* vars_csv, const char* poly_a, const char* poly_b,
                              char** out_text) {
  return wrap([&]() {
    require(vars_csv && poly_a && poly_b && out_text, Errc::invalid_argument, "null argument");
    std::vector<std::string> vars;
    for (const std::string& v : split(vars_csv, ',')) {
      std::string t = trim(v);
      require(!t.empty(), Errc::parse, "empty variable name in list");
      vars.push_back(t);
    }
    models::PolyModel a = models::parse_poly(poly_a, vars);
    models::PolyModel b = models::parse_poly(poly_b, vars);

    auto describe = [&](const char* tag, const models::PolyModel& m) {
      models::ModelMeasures mm = models::measures(m);
      std::ostringstream out;
      out << tag << ": " << m.str() << "\n  NUC=" << mm.nuc << " HP=" << mm.hp << " HPV={";
      for (std::size_t i = 0; i < mm.hpv.size(); ++i) {
        if (i) out << ", ";
        out << models::monomial_str(mm.hpv[i], m.variables);
      }
      out << "} SP=" << mm.sp << "\n";
      return out.str();
    };

    std::ostringstream out;
    out << describe("A", a) << describe("B", b);
    out << "order_mu(A,B): " << ordering_name(models::order_mu(a, b)) << "\n";
    out << "order_mg(A,B): " << ordering_name(models::order_mg(a, b)) << "\n";
    out << "order_ms(A,B): " << ordering_name(models::order_ms(a, b)) << "\n";
    *out_text = dup_text(out.str());
    return DLPK_OK;
  });
}

void dlpk_config_init(dlpk_config* cfg) {
  if (!cfg) return;
  cfg->threshold = -1.0;
  cfg->max_depth = -1;
  cfg->refine_factor = -1.0;
  cfg->window = -1;
  cfg->orientation = 0;
  cfg->kappa = -1.0;
  cfg->shrink_rho = -1.0;
  cfg->seed = 0;
  cfg->ddt_threshold = -1.0;
  cfg->min_radius = -1.0;
}

}  // extern "C"

namespace {

shapes::Shape parse_shape(const std::string& spec) {
  std::size_t colon = spec.find(':');
  require(colon != std::string::npos, Errc::parse,
          "shape must be circle:cx,cy,r or lens:xa,xg,yb,h: " + spec);
  std::string kind = trim(spec.substr(0, colon));
  std::vector<std::string> nums = split(spec.substr(colon + 1), ',');
  if (kind == "circle") {
    require(nums.size() == 3, Errc::parse, "circle needs cx,cy,r: " + spec);
    return shapes::CircleParams{parse_num(trim(nums[0]), "cx"), parse_num(trim(nums[1]), "cy"),
                                parse_num(trim(nums[2]), "r")};
  }
  if (kind == "lens") {
    require(nums.size() == 4, Errc::parse, "lens needs xa,xg,yb,h: " + spec);
    return shapes::LensParams{parse_num(trim(nums[0]), "xa"), parse_num(trim(nums[1]), "xg"),
                              parse_num(trim(nums[2]), "yb"), parse_num(trim(nums[3]), "h")};
  }
  fail(Errc::parse, "unknown shape kind '" + kind + "' in: " + spec);
}

shapes::DetectConfig detect_config(const dlpk_config* cfg) {
  shapes::DetectConfig out;
  if (!cfg) return out;
  if (cfg->ddt_threshold >= 0) out.t = cfg->ddt_threshold;
  if (cfg->min_radius >= 0) out.min_radius = cfg->min_radius;
  if (cfg->threshold >= 0) out.engine_threshold = cfg->threshold;
  if (cfg->kappa > 0) out.kappa = cfg->kappa;
  if (cfg->max_depth >= 0) out.max_depth = cfg->max_depth;
  if (cfg->window >= 0) out.window = cfg->window;
  if (cfg->refine_factor > 0) out.refine_factor = cfg->refine_factor;
  out.orientation =
      cfg->orientation == 1 ? dlp::Orientation::Minimize : dlp::Orientation::Maximize;
  return out;
}

std::string detection_lines(const std::vector<shapes::Detection>& detections) {
  std::ostringstream out;
  out << "detections: " << detections.size() << "\n";
  for (const shapes::Detection& d : detections) {
    std::ostringstream nums;
    nums.setf(std::ios::fixed);
    nums.precision(4);
    nums << " gap=" << d.gap << " z=" << d.z;
    out << "  " << shapes::shape_str(d.shape) << nums.str() << "\n";
  }
  return out.str();
}

}  // namespace

extern "C" {

dlpk_status dlpk_scene_gen(int n, int m, const char* shapes_spec, double contrast,
                           uint64_t seed, const char* out_path, char** summary_out) {
  return wrap([&]() {
    require(out_path, Errc::invalid_argument, "output path is null");
    shapes::SceneSpec spec;
    spec.n = n;
    spec.m = m;
    spec.contrast = contrast;
    spec.seed = seed;
    if (shapes_spec && *shapes_spec) {
      for (const std::string& part : split(shapes_spec, ';'))
        if (!trim(part).empty()) spec.shapes.push_back(parse_shape(trim(part)));
    }
    shapes::PointCloud cloud = shapes::gen_scene(spec);
    cloud.save(out_path);
    if (summary_out) {
      std::ostringstream out;
      out << "wrote " << cloud.size() << " points to " << out_path << " (n=" << n
          << ", shapes=" << spec.shapes.size() << ", contrast=" << contrast
          << ", seed=" << seed << ")\n";
      *summary_out = dup_text(out.str());
    }
    return DLPK_OK;
  });
}

dlpk_status dlpk_shapes_detect(const char* algo, const char* kind, int n, const char* in_path,
                               const dlpk_config* cfg, const char* trace_path,
                               char** report_out) {
  return wrap([&]() {
    require(algo && kind && in_path && report_out, Errc::invalid_argument, "null argument");
    std::string algo_s(algo), kind_s(kind);
    require(algo_s == "brute" || algo_s == "dlp", Errc::invalid_argument,
            "algo must be brute or dlp");
    require(kind_s == "circle" || kind_s == "lens", Errc::invalid_argument,
            "kind must be circle or lens");
    shapes::ShapeKind sk =
        kind_s == "circle" ? shapes::ShapeKind::Circle : shapes::ShapeKind::Lens;
    shapes::PointCloud cloud = shapes::PointCloud::load(in_path);
    shapes::DetectConfig dcfg = detect_config(cfg);

    double t = dcfg.t >= 0 ? dcfg.t : shapes::default_ddt_threshold(n, cloud.size());
    double min_r = dcfg.min_radius >= 0 ? dcfg.min_radius : shapes::default_min_radius(n);

    std::ostringstream out;
    out << "algo=" << algo_s << " kind=" << kind_s << " n=" << n << " points=" << cloud.size()
        << " t=" << t << " min_radius=" << min_r << "\n";
    if (algo_s == "brute") {
      shapes::BruteResult res = shapes::brute_force_search(cloud, n, sk, dcfg);
      out << detection_lines(res.detections);
      out << "counters: membership_tests=" << res.counters.membership_tests
          << " ddt_calls=" << res.counters.ddt_calls << "\n";
    } else {
      shapes::DlpResult res = shapes::dlp_search(cloud, n, sk, dcfg);
      if (trace_path) res.trace.save(trace_path);
      out << detection_lines(res.detections);
      out << "counters: membership_tests=" << res.counters.membership_tests
          << " ddt_calls=" << res.counters.ddt_calls << "\n";
    }
    *report_out = dup_text(out.str());
    return DLPK_OK;
  });
}

dlpk_status dlpk_shapes_scaling(const char* kind, const char* sizes_spec, int allow_huge,
                                uint64_t seed, char** report_out) {
  return wrap([&]() {
    require(kind && sizes_spec && report_out, Errc::invalid_argument, "null argument");
    std::string kind_s(kind);
    require(kind_s == "circle" || kind_s == "lens", Errc::invalid_argument,
            "kind must be circle or lens");
    std::vector<std::pair<int, int>> sizes;
    for (const std::string& part : split(sizes_spec, ',')) {
      std::string p = trim(part);
      if (p.empty()) continue;
      std::size_t colon = p.find(':');
      require(colon != std::string::npos, Errc::parse, "sizes must be n:m pairs: " + p);
      sizes.emplace_back(static_cast<int>(parse_num(p.substr(0, colon), "n")),
                         static_cast<int>(parse_num(p.substr(colon + 1), "m")));
    }
    shapes::ShapeKind sk =
        kind_s == "circle" ? shapes::ShapeKind::Circle : shapes::ShapeKind::Lens;
    shapes::ScalingReport report = shapes::scaling_report(sk, sizes, seed, allow_huge != 0);
    *report_out = dup_text(report.str(sk));
    return DLPK_OK;
  });
}

dlpk_status dlpk_interval_demo(double a, double b, int m, double contrast, double resolution,
                               const dlpk_config* cfg, const char* trace_path,
                               char** report_out) {
  return wrap([&]() {
    require(report_out, Errc::invalid_argument, "null argument");
    require(b > a, Errc::invalid_argument, "target interval needs a < b");
    intervals::IntervalModel target{(a + b) / 2, (b - a) / 2};
    uint64_t seed = cfg ? cfg->seed : 0;
    std::vector<double> samples = intervals::gen_interval_data(target, m, contrast, seed);

    intervals::RefineConfig rcfg;
    rcfg.resolution = resolution;
    if (cfg && cfg->shrink_rho > 0) rcfg.shrink_rho = cfg->shrink_rho;
    if (cfg && cfg->threshold >= 0) rcfg.threshold = cfg->threshold;
    intervals::RefineResult res = intervals::refine_loop(samples, rcfg);
    if (trace_path) res.trace.save(trace_path);

    std::ostringstream out;
    out << "target=[" << a << ", " << b << "] m=" << m << " contrast=" << contrast
        << " resolution=" << resolution << " seed=" << seed << "\n";
    out << "sigma\tclass\tverdict\n";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (const trace::Step& st : res.trace.steps) {
      if (!st.chain) continue;
      out << *st.level << "\t" << st.id << "\t" << st.verdict << "\n";
    }
    out << "evaluations: " << res.evaluations << "\n";
    if (!res.localized) {
      out << "localization failed\n";
      *report_out = dup_text(out.str());
      g_last_error = "localization failed";
      return DLPK_ERR_NOT_FOUND;
    }
    out << "estimate: c=" << res.estimate.c << " r=" << res.estimate.r << " (interval ["
        << res.estimate.c - res.estimate.r << ", " << res.estimate.c + res.estimate.r
        << "])\n";
    *report_out = dup_text(out.str());
    return DLPK_OK;
  });
}

dlpk_status dlpk_reason(const char* kb_path, const char* query, int depth,
                        const char* rules_csv, char** report_out) {
  return wrap([&]() {
    require(kb_path && query && report_out, Errc::invalid_argument, "null argument");
    std::vector<reason::Fact> kb = reason::load_kb(kb_path);
    reason::Fact goal = reason::parse_fact(query);
    reason::RuleSet rules;
    if (rules_csv && *rules_csv) {
      rules = {false, false, false, false, false};
      for (const std::string& part : split(rules_csv, ',')) {
        std::string r = trim(part);
        if (r == "ca")
          rules.ca = true;
        else if (r == "da")
          rules.da = true;
        else if (r == "dca")
          rules.dca = true;
        else if (r == "ia")
          rules.ia = true;
        else if (r == "ta")
          rules.ta = true;
        else
          fail(Errc::invalid_argument, "unknown rule '" + r + "' (want ca,da,dca,ia,ta)");
      }
    }
    std::optional<reason::Derivation> deriv = reason::derive(kb, goal, depth, rules);
    if (!deriv) {
      *report_out = dup_text("not derivable: " + goal.str() + "\n");
      g_last_error = "not derivable";
      return DLPK_ERR_NOT_FOUND;
    }
    std::ostringstream out;
    out << deriv->str();
    out << "derivable in " << deriv->rule_steps() << " step"
        << (deriv->rule_steps() == 1 ? "" : "s") << ": " << goal.str() << "\n";
    *report_out = dup_text(out.str());
    return DLPK_OK;
  });
}

dlpk_status dlpk_viz_render(const char* trace_path, const char* format, const char* arrange,
                            int highlight_weight, char** doc_out) {
  return wrap([&]() {
    require(trace_path && format && arrange && doc_out, Errc::invalid_argument,
            "null argument");
    std::string format_s(format), arrange_s(arrange);
    require(format_s == "svg" || format_s == "text", Errc::invalid_argument,
            "format must be svg or text");
    require(arrange_s == "chronological" || arrange_s == "pareto", Errc::invalid_argument,
            "arrange must be chronological or pareto");
    trace::Trace trace = trace::Trace::load(trace_path);
    std::optional<int> highlight;
    if (highlight_weight >= 0) highlight = highlight_weight;
    std::string doc = viz::render_trace(
        trace, format_s == "svg" ? viz::Format::Svg : viz::Format::Text,
        arrange_s == "chronological" ? viz::Arrangement::Chronological
                                     : viz::Arrangement::Pareto,
        highlight);
    *doc_out = dup_text(doc);
    return DLPK_OK;
  });
}

}  // extern "C"
