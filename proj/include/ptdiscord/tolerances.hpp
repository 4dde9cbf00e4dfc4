#pragma once

// Centralized numeric tolerances and guard thresholds. Everything that decides
// "physical / converged / overflowed" reads from here.

namespace ptdiscord::tol {

inline constexpr double physicality = 1e-9;   // nu_- >= 1 - physicality
inline constexpr double residual = 1e-10;     // linear-system residual bound
inline constexpr double spectral = 1e-12;     // eigenvalue / Hurwitz margin

inline constexpr double entropy_domain = 1e-9;     // clamp band below x = 1
inline constexpr double entropy_asymptotic_x = 1e8;  // switch to ln(x/2) + 1
inline constexpr double log_domain_entry = 1e50;   // invariants overflow-safe above this

inline constexpr double covariance_overflow = 1e100;
inline constexpr double mean_field_overflow = 1e150;
inline constexpr double exponential_overflow = 1e290;

}  // namespace ptdiscord::tol
