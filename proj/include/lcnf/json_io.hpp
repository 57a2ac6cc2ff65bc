#pragma once

#include <string>

#include "lcnf/classify.hpp"
#include "lcnf/locator.hpp"
#include "lcnf/normalform.hpp"

namespace lcnf {

// Full analysis output: located point, coefficients, unfolding quantities,
// and the scenario verdict (recomputable from the coefficients).
struct AnalysisReport {
    Codim2Point point;
    NormalFormReport report;
    UnfoldingQuantities unfolding;
    ScenarioVerdict verdict;
};

// All writers format floating point with 17 significant digits, which
// round-trips doubles exactly and keeps outputs byte-stable.
std::string fmt17(double v);

std::string orbit_to_json(const PeriodicOrbit& orbit, const std::string& model);
PeriodicOrbit orbit_from_json(const std::string& text, std::string* model_out = nullptr);

std::string point_to_json(const Codim2Point& pt);
Codim2Point point_from_json(const std::string& text);

std::string analysis_to_json(const AnalysisReport& ar);
AnalysisReport analysis_from_json(const std::string& text);

std::string verdict_to_json(const UnfoldingQuantities& q, const ScenarioVerdict& v);

}  // namespace lcnf
