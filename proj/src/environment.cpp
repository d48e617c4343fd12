#include "roughmc/environment.hpp"

#include <utility>

namespace roughmc {

Environment make_environment(const PeriodicModel& model, const EffectiveCoefficients& coeffs) {
    Environment env;
    env.Q = model.Q;
    env.Qprime = model.Qprime;
    env.Vprime = model.Vprime;
    env.D = model.D;
    env.kappa = coeffs.kappa;
    env.corrector_scale = model.lambda / coeffs.Lhat;
    return env;
}

Environment make_environment(std::shared_ptr<const FieldRealization> field,
                             const RandomHomogenized& consts,
                             std::function<double(double)> Vprime, double D) {
    Environment env;
    env.Q = [field](double y) { return field->value(y); };
    env.Qprime = [field](double y) { return field->derivative(y); };
    env.Vprime = std::move(Vprime);
    env.D = D;
    env.kappa = consts.kappa;
    env.corrector_scale = 1.0 / consts.Khat;
    return env;
}

Environment make_environment(std::shared_ptr<const TabulatedField> field,
                             const RandomHomogenized& consts,
                             std::function<double(double)> Vprime, double D) {
    Environment env;
    env.Q = [field](double y) { return field->value(y); };
    env.Qprime = [field](double y) { return field->derivative(y); };
    env.Vprime = std::move(Vprime);
    env.D = D;
    env.kappa = consts.kappa;
    env.corrector_scale = 1.0 / consts.Khat;
    return env;
}

Environment make_flat_environment(std::function<double(double)> Vprime, double D) {
    Environment env;
    env.Vprime = std::move(Vprime);
    env.D = D;
    return env;
}

}  // namespace roughmc
