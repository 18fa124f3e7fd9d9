#pragma once

// Benchmark qubit states and the closed-form expressions published for them.
// The closed forms are independent of the matrix-element route in bounds.hpp
// and serve as its oracle.
//
// Noise convention: both mixtures use (1 - p1 - p2)/2^n I so the trace is 1
// for every parameter value. Positivity holds on p1, p2 >= 0, p1 + p2 <= 1;
// outside that triangle the constructors still return a unit-trace Hermitian
// operator and leave positivity to the caller (see psd.hpp).

#include <string>
#include <string_view>

#include "kme/bounds.hpp"
#include "kme/qnum.hpp"

namespace kme {

StateVector make_ghz(int n);
StateVector make_w(int n);
/// W with every bit flipped: support on the weight n-1 basis states.
StateVector make_anti_w(int n);

/// (1-a-b)/2^n I + a |W><W| + b |anti-W><anti-W|, n >= 3.
DensityMatrix make_w_antiw_mix(int n, double a, double b);
/// alpha |GHZ><GHZ| + beta |W><W| + (1-alpha-beta)/2^n I, n >= 3.
DensityMatrix make_ghz_w_mix(int n, double alpha, double beta);

enum class FamilyId { w_antiw, ghz_w };
FamilyId parse_family(std::string_view name);
std::string_view family_name(FamilyId id);
DensityMatrix make_family(FamilyId id, int n, double p1, double p2);

/// |0...0> with flips |1>, and its partner |1...1> with flips |0>.
Probe computational_probe(int n);
Probe computational_partner_probe(int n);
ProbePair computational_pair(int n);
/// ((|0>-|1>)/sqrt2)^n with flips (|0>+|1>)/sqrt2, and the partner pair.
Probe hadamard_probe(int n);
ProbePair hadamard_pair(int n);

enum class WBranch { phi0, phi1 };
/// Closed-form I_k for the W/anti-W mixture; phi1 uses |1...1> with flips to 0.
/// n = 3 has its own branch because anti-W then lives on weight-2 states.
double closed_i_k_w_antiw(int n, int k, double a, double b, WBranch which);

enum class ProbeKind { computational, hadamard };
/// Closed-form order-1 bound h_k_sound * I_k for the GHZ/W mixture.
double closed_bound1_ghz_w(int n, int k, double alpha, double beta, ProbeKind probe);

// Comparison bounds from earlier work, evaluated as published. They bound
// the GME concurrence, which is C_2 / sqrt(2).

/// Order-1 prefactor of the earlier bound, 1/(sqrt2 (n-1)).
double competitor_prefactor(int n);
/// max over phi0, phi1 of competitor_prefactor(n) * I_k for the W/anti-W mixture.
double competitor_bound1_w_antiw(int n, int k, double a, double b);
/// Two-copy criterion with |0...0>|1...1> for the GHZ/W mixture:
///   2[alpha/2 - n sqrt((beta/n + N) N) - c_n N],  N = (1-alpha-beta)/2^n,
/// c_n = C(n,2)+...+C(n,n/2-1) + C(n,n/2)/2 (n even) or C(n,2)+...+C(n,floor(n/2)) (n odd).
double competitor_ghz_w_computational(int n, double alpha, double beta);
/// Hadamard-basis formula printed for n = 5. It has no subtracted term and is
/// positive everywhere, so it cannot mark a detection boundary; kept for
/// reference only.
double competitor_g5w5_hadamard(double alpha, double beta);

}  // namespace kme
