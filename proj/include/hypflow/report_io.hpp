#pragma once

// File outputs: RFC-4180 CSV (CRLF, 17 significant digits), versioned JSON
// documents, and the limit-set SVG.

#include <string>

#include "hypflow/config.hpp"
#include "hypflow/dynamics.hpp"

namespace hypflow {

inline constexpr int kSchemaVersion = 1;

std::string fmt17(double x);  // shortest fixed 17-significant-digit decimal

void write_text_file(const std::string& path, const std::string& content);

std::string orbit_ball_csv(const OrbitBall& ball);
std::string annuli_csv(const AnnuliCounts& annuli);
std::string poincare_report_json(const PoincareReport& report,
                                 const std::string& preset);
std::string histogram_csv(const MeasureHistogram& mu);
std::string cocycle_audit_json(const CocycleAuditReport& report, double r,
                               const DiskPoint& p, const DiskPoint& q);
std::string equivariance_audit_json(const EquivarianceAudit& audit, double s,
                                    size_t bins);
std::string shadow_audit_json(const ShadowLemmaAudit& audit, double R, double r,
                              size_t bins);
std::string limitset_svg(const MeasureHistogram& mu, const OrbitBall& ball,
                         size_t max_points);
std::string conservativity_report_json(const ConservativityReport& report,
                                       const RunConfig& cfg);
std::string classification_records_csv(const ConservativityReport& report);

}  // namespace hypflow
