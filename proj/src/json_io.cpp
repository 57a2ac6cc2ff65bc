#include "lcnf/json_io.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace lcnf {

using njson = nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Bare integers are still valid JSON numbers; keep as is.
    return s;
}

namespace {

std::string cplxArr(const Cplx& z) {
    return "[" + fmt17(z.real()) + "," + fmt17(z.imag()) + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string paramsObj(const Vec& params, const std::vector<std::string>& names) {
    std::ostringstream os;
    os << "{";
    for (int i = 0; i < params.size(); ++i) {
        if (i) os << ",";
        os << quoted(names[i]) << ":" << fmt17(params[i]);
    }
    os << "}";
    return os.str();
}

std::string orbitBody(const PeriodicOrbit& orbit, const std::string& model) {
    const OdeSystem sys = builtin_models().get(model);
    const Mesh& mesh = *orbit.profile.mesh();
    std::ostringstream os;
    os << "{\"schema_version\":1,\"model\":" << quoted(model)
       << ",\"params\":" << paramsObj(orbit.params, sys.param_names)
       << ",\"period\":" << fmt17(orbit.period) << ",\"mesh\":{\"ntst\":" << mesh.ntst()
       << ",\"ncol\":" << mesh.ncol() << ",\"breakpoints\":[";
    for (int j = 0; j <= mesh.ntst(); ++j) {
        if (j) os << ",";
        os << fmt17(mesh.breaks()[j]);
    }
    os << "]},\"profile\":[";
    for (int idx = 0; idx < mesh.nPoints(); ++idx) {
        if (idx) os << ",";
        os << "[";
        for (int r = 0; r < orbit.profile.n(); ++r) {
            if (r) os << ",";
            os << fmt17(orbit.profile.values()(r, idx).real());
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

PeriodicOrbit orbitFromJson(const njson& j, std::string* model_out) {
    const std::string model = j.at("model");
    const OdeSystem sys = builtin_models().get(model);
    if (model_out) *model_out = model;

    const auto& jm = j.at("mesh");
    std::vector<double> breaks = jm.at("breakpoints").get<std::vector<double>>();
    auto mesh = Mesh::withBreaks(std::move(breaks), jm.at("ncol").get<int>());

    PeriodicOrbit orbit;
    orbit.period = j.at("period").get<double>();
    std::map<std::string, double> overrides;
    for (auto& [k, v] : j.at("params").items()) overrides[k] = v.get<double>();
    orbit.params = sys.paramsWith(overrides);

    const auto& prof = j.at("profile");
    CMat vals(sys.dim, mesh->nPoints());
    if (static_cast<int>(prof.size()) != mesh->nPoints())
        throw LcnfError("orbit JSON: profile length does not match mesh");
    for (int idx = 0; idx < mesh->nPoints(); ++idx)
        for (int r = 0; r < sys.dim; ++r)
            vals(r, idx) = Cplx(prof[idx][r].get<double>(), 0.0);
    orbit.profile = MeshFunction(mesh, orbit.period, std::move(vals));
    return orbit;
}

std::string pointBody(const Codim2Point& pt) {
    std::ostringstream os;
    os << "{\"schema_version\":1,\"kind\":" << quoted(to_string(pt.kind))
       << ",\"free_params\":[";
    for (size_t i = 0; i < pt.free_params.size(); ++i) {
        if (i) os << ",";
        os << quoted(pt.free_params[i]);
    }
    os << "],\"omega\":[" << fmt17(pt.omega1);
    if (pt.kind == BifKind::NSNS) os << "," << fmt17(pt.omega2);
    os << "],\"test_residuals\":[";
    for (int i = 0; i < pt.test_residuals.size(); ++i) {
        if (i) os << ",";
        os << fmt17(pt.test_residuals[i]);
    }
    os << "],\"multipliers\":[";
    for (size_t i = 0; i < pt.multipliers.size(); ++i) {
        if (i) os << ",";
        os << cplxArr(pt.multipliers[i]);
    }
    os << "],\"orbit\":" << orbitBody(pt.orbit, pt.model) << "}";
    return os.str();
}

Codim2Point pointFromJson(const njson& j) {
    Codim2Point pt;
    pt.kind = bif_kind_from_string(j.at("kind").get<std::string>());
    pt.orbit = orbitFromJson(j.at("orbit"), &pt.model);
    for (const auto& s : j.at("free_params")) pt.free_params.push_back(s.get<std::string>());
    const auto& om = j.at("omega");
    pt.omega1 = om[0].get<double>();
    if (om.size() > 1) pt.omega2 = om[1].get<double>();
    const auto& tr = j.at("test_residuals");
    pt.test_residuals = Vec(tr.size());
    for (size_t i = 0; i < tr.size(); ++i) pt.test_residuals[i] = tr[i].get<double>();
    for (const auto& m : j.at("multipliers"))
        pt.multipliers.push_back(Cplx(m[0].get<double>(), m[1].get<double>()));
    return pt;
}

std::string unfoldingBody(const UnfoldingQuantities& q) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    auto put = [&](const char* k, const std::string& v) {
        if (!first) os << ",";
        first = false;
        os << quoted(k) << ":" << v;
    };
    if (q.s) put("s", std::to_string(*q.s));
    if (q.theta) put("theta", fmt17(*q.theta));
    if (q.delta) put("delta", fmt17(*q.delta));
    if (q.E) put("E", fmt17(*q.E));
    if (q.p11) put("p11", fmt17(*q.p11));
    if (q.p12) put("p12", fmt17(*q.p12));
    if (q.p21) put("p21", fmt17(*q.p21));
    if (q.p22) put("p22", fmt17(*q.p22));
    if (q.s1) put("s1", fmt17(*q.s1));
    if (q.s2) put("s2", fmt17(*q.s2));
    if (q.Theta) put("Theta", fmt17(*q.Theta));
    if (q.Delta) put("Delta", fmt17(*q.Delta));
    if (q.sign_l1) put("sign_l1", std::to_string(*q.sign_l1));
    os << "}";
    return os.str();
}

UnfoldingQuantities unfoldingFromJson(const njson& j, BifKind kind) {
    UnfoldingQuantities q;
    q.kind = kind;
    auto opt = [&](const char* k) -> std::optional<double> {
        if (j.contains(k)) return j.at(k).get<double>();
        return std::nullopt;
    };
    if (j.contains("s")) q.s = j.at("s").get<int>();
    q.theta = opt("theta");
    q.delta = opt("delta");
    q.E = opt("E");
    q.p11 = opt("p11");
    q.p12 = opt("p12");
    q.p21 = opt("p21");
    q.p22 = opt("p22");
    q.s1 = opt("s1");
    q.s2 = opt("s2");
    q.Theta = opt("Theta");
    q.Delta = opt("Delta");
    if (j.contains("sign_l1")) q.sign_l1 = j.at("sign_l1").get<int>();
    return q;
}

std::string verdictBody(const ScenarioVerdict& v) {
    std::ostringstream os;
    os << "{\"case_label\":" << quoted(v.case_label)
       << ",\"swapped\":" << (v.swapped ? "true" : "false") << ",\"torus_inventory\":[";
    for (size_t i = 0; i < v.torus_inventory.size(); ++i) {
        if (i) os << ",";
        os << "{\"object\":" << quoted(v.torus_inventory[i].object)
           << ",\"stability\":" << quoted(v.torus_inventory[i].stability) << "}";
    }
    os << "]}";
    return os.str();
}

ScenarioVerdict verdictFromJson(const njson& j) {
    ScenarioVerdict v;
    v.case_label = j.at("case_label").get<std::string>();
    v.swapped = j.at("swapped").get<bool>();
    for (const auto& t : j.at("torus_inventory"))
        v.torus_inventory.push_back(
            {t.at("object").get<std::string>(), t.at("stability").get<std::string>()});
    return v;
}

}  // namespace

std::string orbit_to_json(const PeriodicOrbit& orbit, const std::string& model) {
    return orbitBody(orbit, model);
}

PeriodicOrbit orbit_from_json(const std::string& text, std::string* model_out) {
    return orbitFromJson(njson::parse(text), model_out);
}

std::string point_to_json(const Codim2Point& pt) { return pointBody(pt); }

Codim2Point point_from_json(const std::string& text) {
    return pointFromJson(njson::parse(text));
}

std::string analysis_to_json(const AnalysisReport& ar) {
    std::ostringstream os;
    os << "{\"schema_version\":1,\"kind\":" << quoted(to_string(ar.report.kind))
       << ",\"order\":" << ar.report.order << ",\"point\":" << pointBody(ar.point)
       << ",\"coefficients\":{";
    bool first = true;
    for (const auto& [k, v] : ar.report.coefficients) {
        if (!first) os << ",";
        first = false;
        os << quoted(k) << ":" << cplxArr(v);
    }
    os << "},\"derived\":" << unfoldingBody(ar.unfolding)
       << ",\"verdict\":" << verdictBody(ar.verdict) << ",\"diagnostics\":{";
    first = true;
    for (const auto& [k, v] : ar.report.diagnostics) {
        if (!first) os << ",";
        first = false;
        os << quoted(k) << ":" << fmt17(v);
    }
    os << "}}";
    return os.str();
}

AnalysisReport analysis_from_json(const std::string& text) {
    const njson j = njson::parse(text);
    AnalysisReport ar;
    ar.report.kind = bif_kind_from_string(j.at("kind").get<std::string>());
    ar.report.order = j.at("order").get<int>();
    ar.point = pointFromJson(j.at("point"));
    for (auto& [k, v] : j.at("coefficients").items())
        ar.report.coefficients[k] = Cplx(v[0].get<double>(), v[1].get<double>());
    for (auto& [k, v] : j.at("diagnostics").items())
        ar.report.diagnostics[k] = v.get<double>();
    ar.unfolding = unfoldingFromJson(j.at("derived"), ar.report.kind);
    ar.verdict = verdictFromJson(j.at("verdict"));
    return ar;
}

std::string verdict_to_json(const UnfoldingQuantities& q, const ScenarioVerdict& v) {
    return "{\"schema_version\":1,\"derived\":" + unfoldingBody(q) +
           ",\"verdict\":" + verdictBody(v) + "}";
}

}  // namespace lcnf
