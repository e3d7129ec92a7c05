#pragma once

#include "double/algebra.hpp"

#include <string>
#include <vector>

namespace dbl {

using Matrix = std::vector<std::vector<Rational>>;

struct Seed {
    int n = 0;
    std::vector<bool> frozen;
    Matrix eps;
    std::vector<Rational> d;

    static Seed make(Matrix eps, std::vector<bool> frozen = {}, std::vector<Rational> d = {});

    // Unfrozen indices in increasing order.
    std::vector<int> unfrozen() const;
    int position_in_unfrozen(int i) const;
    bool is_frozen(int i) const { return frozen.at(i); }
    // Integer entry; throws if the entry is not integral.
    long entry(int i, int j) const;
    void validate() const;

    bool operator==(const Seed& o) const = default;
};

Seed mutate_matrix(const Seed& s, int k);
Seed apply_word(const Seed& s, const std::vector<int>& word);

enum class StateKind { A, X, D, TropA, TropX, TropD };
std::string kind_name(StateKind k);
StateKind parse_kind(const std::string& s);

// Coordinates attached to a seed. Symbolic kinds use `values` (A over I, X over J)
// plus `bvalues` (B over J) for D; tropical kinds use `tvalues`/`tbvalues`.
struct ClusterState {
    Seed seed;
    StateKind kind = StateKind::X;
    std::vector<RationalExpr> values, bvalues;
    std::vector<Rational> tvalues, tbvalues;

    bool symbolic() const { return kind == StateKind::A || kind == StateKind::X || kind == StateKind::D; }
    bool operator==(const ClusterState& o) const;
};

// Variable names per seed index, e.g. {"1","2",...} or triangulation edge ids.
std::vector<std::string> default_labels(int n);

ClusterState initial_state(const Seed& s, StateKind kind, const std::vector<std::string>& labels = {});
ClusterState tropical_state(const Seed& s, StateKind kind, std::vector<Rational> v, std::vector<Rational> b = {});
ClusterState mutate_state(const ClusterState& st, int k);
ClusterState mutate_state_word(ClusterState st, const std::vector<int>& word);

// ---------------------------------------------------------------- Y-patterns

enum class Semifield { trop, qsf, trivial };
std::string semifield_name(Semifield s);

// Labeled seed (x, y, B) over a semifield; all values live over `ambient`.
// For trop the y are unit-coefficient monomials; for trivial they are 1.
struct YSeed {
    Semifield semifield = Semifield::trivial;
    std::vector<std::vector<long>> b;
    std::vector<RationalExpr> x, y;
    VarSet ambient;

    bool operator==(const YSeed& o) const;
};

std::vector<std::vector<long>> b_from_seed(const Seed& s);
RationalExpr semifield_sum(Semifield sf, const RationalExpr& a, const RationalExpr& b);
void check_in_semifield(Semifield sf, const RationalExpr& v);
YSeed mutate_with_coefficients(const YSeed& ys, int k);
std::vector<std::vector<long>> mutate_b(const std::vector<std::vector<long>>& b, int k);

// Evaluates a subtraction-free polynomial in the semifield at the given values.
RationalExpr semifield_eval(Semifield sf, const LaurentExpr& f, const std::vector<RationalExpr>& at, const VarSet& target);

// D-point seen as a Y-seed over Q_sf: y_j = X_j, x_j = B_j, b_ij = eps_ji.
YSeed yseed_from_d_state(const ClusterState& d);

// ---------------------------------------------------------------- principal coefficients

struct VariableRecord {
    int step = 0;      // 0 for initial variables
    int position = 0;  // position within the unfrozen indices
    LaurentExpr xpoly, fpoly;
    std::vector<long> g;
};

struct PrincipalRun {
    Seed seed;
    std::vector<int> word;  // seed indices
    std::vector<std::vector<long>> b0, final_b;
    VarSet xy, yvars;
    std::vector<VariableRecord> history;
    std::vector<VariableRecord> cluster;
    std::vector<std::vector<long>> c_vectors;  // exponent vectors of the final y's
};

PrincipalRun principal_run(const Seed& s, const std::vector<int>& word);

// F|_F(yhat)/F|_P(y) * x^g for position l of the final cluster of the run.
RationalExpr separation_reconstruct(const PrincipalRun& run, int l, Semifield sf, const std::vector<RationalExpr>& x0,
                                    const std::vector<RationalExpr>& y0);

// ---------------------------------------------------------------- canonical maps

// p*(X_i) = prod_{j in I} A_j^{eps_ij}, for i in J.
std::vector<RationalExpr> p_map(const Seed& s, const std::vector<RationalExpr>& a);
// phi*(B_i) = A_i°/A_i and phi*(X_i) = p*(X_i), for i in J.
struct DPoint {
    std::vector<RationalExpr> b, x;
};
DPoint phi_map(const Seed& s, const std::vector<RationalExpr>& a, const std::vector<RationalExpr>& a_circ);
// pi: (B, X) -> (X, Xhat) with Xhat_i = X_i prod_{j in J} B_j^{eps_ij}.
std::pair<std::vector<RationalExpr>, std::vector<RationalExpr>> pi_map(const Seed& s, const DPoint& p);
// Tropical p: x_i = sum_j eps_ij a_j.
std::vector<Rational> p_map_trop(const Seed& s, const std::vector<Rational>& a);

}  // namespace dbl
