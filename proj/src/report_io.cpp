#include "hypflow/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hypflow {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kCrlf = "\r\n";

ojson json_number(double x) {
  // JSON has no infinities; nlohmann serializes them as null, which is what
  // the schema documents for empty profile tails.
  return ojson(x);
}

ojson delta_json(const DeltaEstimate& est) {
  return ojson{{"value", est.value},
               {"ci_lo", est.lo},
               {"ci_hi", est.hi},
               {"low_confidence", est.low_confidence}};
}

const char* crossing_name(CrossingStatus st) {
  switch (st) {
    case CrossingStatus::ok: return "ok";
    case CrossingStatus::at_grid_min: return "at_grid_min";
    case CrossingStatus::no_crossing: return "no_crossing";
  }
  return "unknown";
}

ojson divergence_json(const DivergenceDiagnostic& diag) {
  return ojson{{"verdict", to_string(diag.verdict)},
               {"slope", diag.slope},
               {"tail_ratio", std::isfinite(diag.tail_ratio) ? ojson(diag.tail_ratio)
                                                             : ojson(nullptr)}};
}

std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string fmt17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string orbit_ball_csv(const OrbitBall& ball) {
  std::string out = "word,a,b,c,d,re,im,dist";
  out += kCrlf;
  for (size_t i = 0; i < ball.elements.size(); ++i) {
    const auto& e = ball.elements[i];
    out += ball.word_string(i);
    for (double v : {e.map.a, e.map.b, e.map.c, e.map.d, e.point.real(),
                     e.point.imag(), e.dist}) {
      out += ',';
      out += fmt17(v);
    }
    out += kCrlf;
  }
  return out;
}

std::string annuli_csv(const AnnuliCounts& annuli) {
  std::string out = "n,a_n";
  out += kCrlf;
  for (size_t n = 0; n < annuli.a.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += std::to_string(annuli.a[n]);
    out += kCrlf;
  }
  return out;
}

std::string poincare_report_json(const PoincareReport& report,
                                 const std::string& preset) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["preset"] = preset;
  doc["radius"] = report.radius;
  doc["ball_complete"] = report.ball_complete;
  doc["delta_counting"] = delta_json(report.delta_counting);
  doc["delta_partial_sum"] = ojson{{"value", report.delta_partial_sum.value},
                                   {"status", crossing_name(report.delta_partial_sum.status)}};
  doc["estimator_gap"] = report.estimator_gap;
  doc["divergence_at_delta"] = divergence_json(report.diagnostic_at_delta);
  doc["annuli"] = report.annuli;
  doc["s_grid"] = report.s_grid;
  doc["partial_sums"] = report.partial_sums;
  return dump(doc);
}

std::string histogram_csv(const MeasureHistogram& mu) {
  std::string out = "bin_index,angle_center,weight";
  out += kCrlf;
  for (size_t k = 0; k < mu.bins; ++k) {
    out += std::to_string(k);
    out += ',';
    out += fmt17(mu.bin_center(k));
    out += ',';
    out += fmt17(mu.weights[k]);
    out += kCrlf;
  }
  return out;
}

std::string cocycle_audit_json(const CocycleAuditReport& report, double r,
                               const DiskPoint& p, const DiskPoint& q) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["r"] = r;
  doc["base_p"] = {p.re, p.im};
  doc["base_q"] = {q.re, q.im};
  doc["max_abs_deviation"] = report.max_abs_deviation;
  doc["mass_weighted_mean"] = report.mass_weighted_mean;
  doc["mass_coverage"] = report.mass_coverage;
  doc["compared_bins"] = report.compared_bins;
  return dump(doc);
}

std::string equivariance_audit_json(const EquivarianceAudit& audit, double s,
                                    size_t bins) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["s"] = s;
  doc["bins"] = bins;
  doc["total_variation"] = audit.total_variation;
  doc["mismatch_bound"] = audit.mismatch_bound;
  doc["annulus_proxy"] = audit.annulus_proxy;
  doc["displacement"] = audit.displacement;
  doc["alpha_in_ball"] = audit.alpha_in_ball;
  return dump(doc);
}

std::string shadow_audit_json(const ShadowLemmaAudit& audit, double R, double r,
                              size_t bins) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["R"] = R;
  doc["r"] = r;
  doc["bins"] = bins;
  doc["min_ratio"] = json_number(audit.min_ratio);
  doc["max_ratio"] = audit.max_ratio;
  doc["c_emp"] = json_number(audit.c_emp);
  doc["spread_log10"] = json_number(audit.spread_log10);
  doc["used"] = audit.used;
  doc["degenerate_shadows"] = audit.degenerate_shadows;
  doc["zero_mass_shadows"] = audit.zero_mass_shadows;
  return dump(doc);
}

std::string limitset_svg(const MeasureHistogram& mu, const OrbitBall& ball,
                         size_t max_points) {
  auto coord = [](double v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return std::string(buf);
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"800\" height=\"800\" viewBox=\"-1.35 -1.35 2.7 2.7\">\n";
  svg << "<rect x=\"-1.35\" y=\"-1.35\" width=\"2.7\" height=\"2.7\" fill=\"white\"/>\n";
  svg << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"0.004\"/>\n";

  double wmax = 0.0;
  for (double w : mu.weights) wmax = std::max(wmax, w);
  if (wmax > 0.0) {
    svg << "<g stroke=\"#1f6fb2\" stroke-width=\"0.004\">\n";
    for (size_t k = 0; k < mu.bins; ++k) {
      if (mu.weights[k] <= 0.0) continue;
      double theta = mu.bin_center(k);
      double len = 0.3 * mu.weights[k] / wmax;
      double c = std::cos(theta), s = std::sin(theta);
      svg << "<line x1=\"" << coord(1.02 * c) << "\" y1=\"" << coord(-1.02 * s)
          << "\" x2=\"" << coord((1.02 + len) * c) << "\" y2=\""
          << coord(-(1.02 + len) * s) << "\"/>\n";
    }
    svg << "</g>\n";
  }

  size_t n = ball.elements.size();
  size_t stride = n > max_points ? (n + max_points - 1) / max_points : 1;
  svg << "<g fill=\"#b2371f\">\n";
  for (size_t i = 0; i < n; i += stride) {
    const auto& z = ball.elements[i].point;
    svg << "<circle cx=\"" << coord(z.real()) << "\" cy=\"" << coord(-z.imag())
        << "\" r=\"0.005\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string conservativity_report_json(const ConservativityReport& report,
                                       const RunConfig& cfg) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["preset"] = report.preset;
  doc["radius"] = report.radius;
  doc["s_used"] = report.s_used;
  doc["bins"] = cfg.bins;
  doc["samples"] = cfg.samples;
  doc["seed"] = cfg.seed;
  doc["ball_size"] = report.ball_size;
  doc["ball_complete"] = report.ball_complete;
  doc["elementary"] = report.elementary;
  if (report.elementary) doc["elementary_reason"] = report.elementary_reason;
  doc["delta_counting"] = delta_json(report.delta_counting);
  doc["delta_partial_sum"] = ojson{{"value", report.delta_partial_sum.value},
                                   {"status", crossing_name(report.delta_partial_sum.status)}};
  if (!report.elementary) {
    doc["divergence_at_delta"] = divergence_json(report.divergence);
    doc["conical"] = ojson{{"threshold", report.conical_threshold},
                           {"pass_fraction", report.conical_pass_fraction},
                           {"samples", report.records.size()}};
    doc["myrberg"] = ojson{{"median_final", report.myrberg_median_final},
                           {"median_earlier", report.myrberg_median_earlier},
                           {"trend_decreasing", report.myrberg_trend_decreasing}};
    doc["lm_subset_lc_violations"] = report.lm_subset_lc_violations;
  }
  doc["verdict"] = report.verdict;
  doc["notes"] = report.notes;
  return dump(doc);
}

std::string classification_records_csv(const ConservativityReport& report) {
  std::string out =
      "sample,theta,limit_dist,conical_final,conical_plateau_ratio,conical_pass,"
      "myrberg_final_eps,myrberg_pass,conical_profile,myrberg_profile";
  out += kCrlf;
  for (size_t i = 0; i < report.records.size(); ++i) {
    const auto& rec = report.records[i];
    out += std::to_string(i);
    out += ',';
    out += fmt17(rec.point.theta);
    out += ',';
    out += fmt17(rec.limit_dist);
    out += ',';
    out += fmt17(rec.conical.c_final);
    out += ',';
    out += fmt17(rec.conical.plateau_ratio);
    out += ',';
    out += rec.conical_pass ? "1" : "0";
    out += ',';
    out += '"';
    for (size_t t = 0; t < rec.myrberg.final_eps.size(); ++t) {
      if (t) out += ';';
      out += fmt17(rec.myrberg.final_eps[t]);
    }
    out += '"';
    out += ',';
    out += rec.myrberg_pass ? "1" : "0";
    out += ',';
    out += '"';
    for (size_t n = 0; n < rec.conical.values.size(); ++n) {
      if (n) out += ';';
      out += std::to_string(n) + ":" + fmt17(rec.conical.values[n]);
    }
    out += '"';
    out += ',';
    out += '"';
    for (size_t t = 0; t < rec.myrberg.best_eps.size(); ++t) {
      if (t) out += '|';
      for (size_t d = 0; d < rec.myrberg.best_eps[t].size(); ++d) {
        if (d) out += ';';
        out += std::to_string(rec.myrberg.depths[d]) + ":" +
               fmt17(rec.myrberg.best_eps[t][d]);
      }
    }
    out += '"';
    out += kCrlf;
  }
  return out;
}

}  // namespace hypflow
