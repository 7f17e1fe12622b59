#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "sdde/errors.hpp"

namespace sdde {

/// Model constants of the scalar DDE
///     u'(t) = -gamma u(t) - kappa1 u(t - a1 - c u(t)) - kappa2 u(t - a2 - c u(t)).
/// Both delay terms share a single state-dependence coefficient c.
struct Parameters {
    double gamma = 4.75;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double a1 = 1.3;
    double a2 = 6.0;
    double c = 1.0;

    void validate() const {
        if (!(std::isfinite(gamma) && std::isfinite(kappa1) && std::isfinite(kappa2) &&
              std::isfinite(a1) && std::isfinite(a2) && std::isfinite(c)))
            throw Error("Parameters: all fields must be finite");
        if (!(gamma > 0.0)) throw Error("Parameters: gamma must be > 0");
        if (kappa1 < 0.0 || kappa2 < 0.0) throw Error("Parameters: kappa1, kappa2 must be >= 0");
        if (!(a1 > 0.0)) throw Error("Parameters: a1 must be > 0");
        if (!(a2 > a1)) throw Error("Parameters: requires a2 > a1");
        if (c < 0.0) throw Error("Parameters: c must be >= 0");
    }

    bool well_posed() const { return gamma > kappa2; }

    void require_well_posed() const {
        if (!well_posed())
            throw WellPosednessViolated("well-posedness requires gamma > kappa2 (gamma=" +
                                        std::to_string(gamma) + ", kappa2=" + std::to_string(kappa2) + ")");
    }
};

/// Global delay bound tau = a2 + (a1/gamma)(kappa1 + kappa2); delays never exceed it
/// for solutions started inside the admissible interval.
inline double max_delay_bound(const Parameters& p) {
    p.require_well_posed();
    return p.a2 + (p.a1 / p.gamma) * (p.kappa1 + p.kappa2);
}

/// Invariant interval (-a1/c, (a1/(gamma c))(kappa1 + kappa2)) that traps all solutions.
inline std::pair<double, double> solution_bound_interval(const Parameters& p) {
    p.require_well_posed();
    if (p.c == 0.0)
        throw DegenerateStateDependence("solution bound interval is unbounded for c = 0");
    return {-p.a1 / p.c, (p.a1 / (p.gamma * p.c)) * (p.kappa1 + p.kappa2)};
}

/// Flat key-value config: "key = value", '#' starts a comment. Unknown keys are rejected.
inline Parameters read_parameters(std::istream& in) {
    Parameters p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        for (auto& ch : line)
            if (ch == '=') ch = ' ';
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        double value;
        if (!(ls >> value))
            throw Error("config line " + std::to_string(lineno) + ": missing numeric value for '" + key + "'");
        if (key == "gamma") p.gamma = value;
        else if (key == "kappa1") p.kappa1 = value;
        else if (key == "kappa2") p.kappa2 = value;
        else if (key == "a1") p.a1 = value;
        else if (key == "a2") p.a2 = value;
        else if (key == "c") p.c = value;
        else throw Error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    p.validate();
    return p;
}

inline void write_parameters(std::ostream& out, const Parameters& p) {
    auto put = [&out](const char* key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out << buf;
    };
    put("gamma", p.gamma);
    put("kappa1", p.kappa1);
    put("kappa2", p.kappa2);
    put("a1", p.a1);
    put("a2", p.a2);
    put("c", p.c);
}

}  // namespace sdde
