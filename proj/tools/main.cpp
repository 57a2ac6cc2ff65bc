#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lcnf/lyapunov.hpp"
#include "lcnf/pipeline.hpp"
#include "lcnf/sim.hpp"

using namespace lcnf;

namespace {

struct RunConfig {
    std::string model;
    std::map<std::string, double> params;
    int ntst = 40, ncol = 4;
    double tol_newton = 1e-10;
    double tol_criticality = 1e-6;
    double tol_locator = 1e-8;
    std::string order = "high";
};

// Flat key-value config with [model], [mesh], [tol] sections.
RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open config file " + path);
    std::string line, section;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ModelError("config line without '=': " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
        if (section == "model") {
            if (key == "name")
                cfg.model = val;
            else
                cfg.params[key] = std::stod(val);
        } else if (section == "mesh") {
            if (key == "ntst") cfg.ntst = std::stoi(val);
            if (key == "ncol") cfg.ncol = std::stoi(val);
        } else if (section == "tol") {
            if (key == "newton") cfg.tol_newton = std::stod(val);
            if (key == "criticality") cfg.tol_criticality = std::stod(val);
            if (key == "locator") cfg.tol_locator = std::stod(val);
        } else if (section == "run") {
            if (key == "order") cfg.order = val;
        }
    }
    return cfg;
}

std::map<std::string, double> parse_assignments(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ModelError("expected name=value, got '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    out << text << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(int argc, char** argv) {
    CLI::App app{"limit-cycle codim-2 normal form toolkit"};
    app.require_subcommand(1);

    std::string config_path, model_name, kind_str, at_str, out_path;
    int ntst = 0, ncol = 0;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file");
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };

    // locate
    auto* cLocate = app.add_subcommand("locate", "locate a codim-2 cycle bifurcation");
    cLocate->add_option("--model", model_name, "model name");
    cLocate->add_option("--kind", kind_str, "lpns|pdns|nsns")->required();
    cLocate->add_option("--at", at_str, "two free parameters, p1=v1,p2=v2")->required();
    cLocate->add_option("--ntst", ntst);
    cLocate->add_option("--ncol", ncol);
    addCommon(cLocate);

    // nf
    std::string point_path, order_str;
    auto* cNf = app.add_subcommand("nf", "normal form coefficients at a located point");
    cNf->add_option("--point", point_path, "point JSON file")->required();
    cNf->add_option("--order", order_str, "low|high");
    addCommon(cNf);

    // classify
    std::string report_path;
    auto* cClassify = app.add_subcommand("classify", "re-derive the scenario verdict");
    cClassify->add_option("--report", report_path)->required();
    addCommon(cClassify);

    // amplitude
    double mu1 = 0.0, mu2 = 0.0;
    auto* cAmp = app.add_subcommand("amplitude", "amplitude-system equilibria (CSV)");
    cAmp->add_option("--report", report_path)->required();
    cAmp->add_option("--mu1", mu1)->required();
    cAmp->add_option("--mu2", mu2)->required();
    addCommon(cAmp);

    // lyapunov
    std::string fix_str, sweep_str, direction = "up", transitions_path, x0_str;
    double t_total = 0.0, t_transient = 0.0;
    auto* cLyap = app.add_subcommand("lyapunov", "Lyapunov exponent sweep (CSV)");
    cLyap->add_option("--model", model_name);
    cLyap->add_option("--fix", fix_str, "fixed parameter overrides p=v,...");
    cLyap->add_option("--sweep", sweep_str, "name:lo:hi:n")->required();
    cLyap->add_option("--direction", direction, "up|down");
    cLyap->add_option("--t-total", t_total);
    cLyap->add_option("--t-transient", t_transient);
    cLyap->add_option("--x0", x0_str, "initial state v1,v2,...");
    cLyap->add_option("--transitions", transitions_path, "companion JSON");
    addCommon(cLyap);

    // floquet
    std::string orbit_path;
    auto* cFloq = app.add_subcommand("floquet", "Floquet multipliers of an orbit");
    cFloq->add_option("--orbit", orbit_path);
    cFloq->add_option("--point", point_path);
    addCommon(cFloq);

    // cycle
    auto* cCycle = app.add_subcommand("cycle", "converge a periodic orbit");
    cCycle->add_option("--model", model_name)->required();
    cCycle->add_option("--at", at_str, "parameter overrides");
    cCycle->add_option("--x0", x0_str, "initial state, comma separated");
    cCycle->add_option("--ntst", ntst);
    cCycle->add_option("--ncol", ncol);
    addCommon(cCycle);

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg = load_config(config_path);
    if (!model_name.empty()) cfg.model = model_name;
    if (ntst > 0) cfg.ntst = ntst;
    if (ncol > 0) cfg.ncol = ncol;
    if (!order_str.empty()) cfg.order = order_str;

    if (cLocate->parsed()) {
        const OdeSystem sys = builtin_models().get(cfg.model);
        auto at = parse_assignments(at_str);
        if (at.size() != 2) throw ModelError("locate needs exactly two parameters");
        auto it = at.begin();
        const auto [p1, v1] = *it++;
        const auto [p2, v2] = *it;
        for (auto& [k, v] : at) sys.paramIndex(k);  // validate names
        LocateOptions opts = preset_locate(cfg.model, bif_kind_from_string(kind_str), v1, v2);
        opts.ntst = cfg.ntst;
        opts.ncol = cfg.ncol;
        opts.locate_tol = cfg.tol_locator;
        opts.criticality_tol = cfg.tol_criticality;
        opts.newton.tol = cfg.tol_newton;
        Codim2Point pt = locate_model(sys, bif_kind_from_string(kind_str), p1, v1, p2, v2, opts);
        write_output(out_path, point_to_json(pt));
        return 0;
    }
    if (cNf->parsed()) {
        Codim2Point pt = point_from_json(read_file(point_path));
        const OdeSystem sys = builtin_models().get(pt.model);
        verify_point(sys, pt, cfg.tol_criticality);
        AnalysisReport ar = analyze_point(sys, pt, cfg.order != "low");
        write_output(out_path, analysis_to_json(ar));
        return 0;
    }
    if (cClassify->parsed()) {
        AnalysisReport ar = analysis_from_json(read_file(report_path));
        UnfoldingQuantities q = derive_unfolding(ar.report);
        write_output(out_path, verdict_to_json(q, classify(q)));
        return 0;
    }
    if (cAmp->parsed()) {
        AnalysisReport ar = analysis_from_json(read_file(report_path));
        std::vector<AmplitudeEquilibrium> eqs;
        if (ar.report.kind == BifKind::LPNS)
            eqs = amplitude_portrait_lpns(*ar.unfolding.s, *ar.unfolding.theta, mu1, mu2);
        else
            eqs = amplitude_portrait_hh(ar.unfolding, mu1, mu2);
        std::ostringstream os;
        os << "r1,r2,type,eig1,eig2\n";
        for (const auto& e : eqs)
            os << fmt17(e.r1) << "," << fmt17(e.r2) << "," << e.type << ","
               << fmt17(e.eig1.real()) << (e.eig1.imag() >= 0 ? "+" : "")
               << fmt17(e.eig1.imag()) << "i," << fmt17(e.eig2.real())
               << (e.eig2.imag() >= 0 ? "+" : "") << fmt17(e.eig2.imag()) << "i\n";
        write_output(out_path, os.str());
        return 0;
    }
    if (cLyap->parsed()) {
        const OdeSystem sys = builtin_models().get(cfg.model);
        LyapunovSweep spec;
        spec.model = cfg.model;
        auto fixed = parse_assignments(fix_str);
        for (auto& [k, v] : cfg.params) fixed.emplace(k, v);
        spec.base_params = sys.paramsWith(fixed);
        {
            std::stringstream ss(sweep_str);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(ss, part, ':')) parts.push_back(part);
            if (parts.size() != 4) throw ModelError("sweep must be name:lo:hi:n");
            spec.sweep_param = parts[0];
            spec.lo = std::stod(parts[1]);
            spec.hi = std::stod(parts[2]);
            spec.samples = std::stoi(parts[3]);
        }
        if (!(spec.hi > spec.lo) || spec.samples < 2)
            throw ModelError("sweep range is empty");
        spec.increasing = direction != "down";
        if (!x0_str.empty()) {
            auto vals = parse_assignments("");  // unused
            std::stringstream ss(x0_str);
            std::string tok;
            std::vector<double> v;
            while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
            spec.x0 = Eigen::Map<Vec>(v.data(), v.size());
        } else {
            spec.x0 = Vec::Constant(sys.dim, 0.3);
        }
        if (t_total > 0) spec.opts.t_total = t_total;
        if (t_transient > 0) spec.opts.t_transient = t_transient;
        SweepResult res = lyapunov_sweep(sys, spec);
        std::ostringstream os;
        os << "param";
        for (int i = 0; i < sys.dim; ++i) os << ",lambda" << (i + 1);
        os << ",zero_count\n";
        for (size_t k = 0; k < res.param.size(); ++k) {
            os << fmt17(res.param[k]);
            for (int i = 0; i < res.exponents[k].size(); ++i)
                os << "," << fmt17(res.exponents[k][i]);
            os << "," << res.zero_count[k] << "\n";
        }
        write_output(out_path, os.str());
        if (!transitions_path.empty()) {
            std::ostringstream tj;
            tj << "{\"transitions\":[";
            for (size_t i = 0; i < res.transitions.size(); ++i)
                tj << (i ? "," : "") << fmt17(res.transitions[i]);
            tj << "]}";
            write_output(transitions_path, tj.str());
        }
        return 0;
    }
    if (cFloq->parsed()) {
        PeriodicOrbit orbit;
        std::string model;
        if (!orbit_path.empty()) {
            orbit = orbit_from_json(read_file(orbit_path), &model);
        } else if (!point_path.empty()) {
            Codim2Point pt = point_from_json(read_file(point_path));
            orbit = pt.orbit;
            model = pt.model;
        } else {
            throw ModelError("floquet needs --orbit or --point");
        }
        const OdeSystem sys = builtin_models().get(model);
        FloquetSpectrum sp = floquet(*sys.compile(orbit.params), orbit);
        std::ostringstream os;
        os << "{\"multipliers\":[";
        for (size_t i = 0; i < sp.multipliers.size(); ++i)
            os << (i ? "," : "") << "[" << fmt17(sp.multipliers[i].real()) << ","
               << fmt17(sp.multipliers[i].imag()) << "]";
        os << "],\"trivial_index\":" << sp.trivial_index << "}";
        write_output(out_path, os.str());
        return 0;
    }
    if (cCycle->parsed()) {
        const OdeSystem sys = builtin_models().get(cfg.model);
        auto at = parse_assignments(at_str);
        for (auto& [k, v] : cfg.params) at.emplace(k, v);
        const Vec params = sys.paramsWith(at);
        Vec x0 = Vec::Constant(sys.dim, 0.3);
        if (!x0_str.empty()) {
            std::stringstream ss(x0_str);
            std::string tok;
            std::vector<double> v;
            while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
            if (static_cast<int>(v.size()) != sys.dim)
                throw ModelError("x0 dimension mismatch");
            x0 = Eigen::Map<Vec>(v.data(), v.size());
        }
        auto rhs = sys.compile(params);
        PeriodicOrbit orbit = cycle_from_simulation(
            *rhs, params, Mesh::uniform(cfg.ntst, cfg.ncol), x0, 500.0, 10000.0);
        write_output(out_path, orbit_to_json(orbit, cfg.model));
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ModelError& e) {
        std::cout << "{\"error\":\"validation\",\"message\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const CriticalityCheckFailed& e) {
        std::cout << "{\"error\":\"CriticalityCheckFailed\",\"message\":\"" << e.what()
                  << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cout << "{\"error\":\"runtime\",\"message\":\"" << e.what() << "\"}\n";
        return 1;
    }
}
