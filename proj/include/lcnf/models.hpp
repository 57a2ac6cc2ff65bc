#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lcnf/polynomial.hpp"
#include "lcnf/types.hpp"

namespace lcnf {

// Right-hand side of one ODE system with the parameter vector baked in.
// Implementations must be immutable and safe to share between threads.
class CompiledRhs {
public:
    virtual ~CompiledRhs() = default;
    virtual int dim() const = 0;
    virtual Vec rhs(const Vec& x) const = 0;
    virtual Mat jacobian(const Vec& x) const = 0;
    // Multilinear form of given order (1..5) applied to the directions.
    // Order 1 with a single direction is the Jacobian-vector product.
    virtual CVec mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const = 0;
    // Degree of a polynomial right-hand side, or -1 when not polynomial.
    virtual int polyDegree() const { return -1; }
};

// Parameterized ODE system: name, dimension, named parameters, and a
// factory producing the fixed-parameter evaluator.
struct OdeSystem {
    std::string name;
    int dim = 0;
    std::vector<std::string> param_names;
    Vec default_params;
    std::function<std::shared_ptr<const CompiledRhs>(const Vec&)> compile;

    int paramIndex(const std::string& pname) const;
    // Positional vector from defaults plus name->value overrides.
    Vec paramsWith(const std::map<std::string, double>& overrides) const;
};

Vec eval_rhs(const OdeSystem& sys, const Vec& x, const Vec& p);
CVec eval_mlf(const OdeSystem& sys, int order, const Vec& x, const Vec& p,
              const std::vector<CVec>& dirs);

class ModelRegistry {
public:
    void add(const std::string& name, std::function<OdeSystem()> factory);
    OdeSystem get(const std::string& name) const;
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, std::function<OdeSystem()>> entries_;
};

// Registry preloaded with the built-in models.
const ModelRegistry& builtin_models();

OdeSystem make_laser();
OdeSystem make_preypredator();
OdeSystem make_vibration();
OdeSystem make_hopfcircle();

// Generic fallback: central finite-difference polarization of directional
// derivatives, step h = eps^(1/(order+2)) * max(1, |x|).
CVec fd_polarization_mlf(const std::function<Vec(const Vec&)>& f, int order,
                         const Vec& x, const std::vector<CVec>& dirs);

// Wraps a plain RHS callable into a CompiledRhs using FD polarization.
std::shared_ptr<const CompiledRhs> make_fd_rhs(int dim,
                                               std::function<Vec(const Vec&)> f);

// Polynomial vector field as a CompiledRhs (exact tensors of all orders).
class PolyRhs : public CompiledRhs {
public:
    explicit PolyRhs(PolySystem sys) : sys_(std::move(sys)) {}
    int dim() const override { return sys_.dim(); }
    Vec rhs(const Vec& x) const override { return sys_.eval(x); }
    Mat jacobian(const Vec& x) const override { return sys_.jacobian(x); }
    CVec mlf(int order, const Vec& x, const std::vector<CVec>& dirs) const override {
        if (order < 1 || order > 5) throw ModelError("mlf order must be in 1..5");
        return sys_.mlf(order, x, dirs);
    }
    int polyDegree() const override { return sys_.degree(); }
    const PolySystem& poly() const { return sys_; }

private:
    PolySystem sys_;
};

}  // namespace lcnf
