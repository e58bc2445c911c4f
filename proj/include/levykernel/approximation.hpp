#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "levykernel/error.hpp"

namespace levykernel {

enum class Method { mb_contour, residue_series, small_r_series, closed_form, oracle };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::mb_contour: return "mb_contour";
    case Method::residue_series: return "residue_series";
    case Method::small_r_series: return "small_r_series";
    case Method::closed_form: return "closed_form";
    case Method::oracle: return "oracle";
    }
    return "unknown";
}

/// One residue of the left-shifted Mellin-Barnes integrand: coefficient * r^{-exponent}.
struct SeriesTerm {
    int n = 0;
    double exponent = 0.0;
    double coefficient = 0.0;
    bool vanished = false;
};

struct Diagnostics {
    int terms_used = 0;
    int nodes_used = 0;
    double truncation_height = 0.0;
    double abscissa = 0.0;
    int panels = 0;
    bool divergence_warning = false;
};

/// A kernel value with an a-posteriori error estimate and the method that produced it.
struct Approximation {
    double value = 0.0;
    double est_error = 0.0;
    Method method = Method::mb_contour;
    Diagnostics diagnostics;
    std::vector<SeriesTerm> terms;
};

}  // namespace levykernel
