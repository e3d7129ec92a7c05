#include "double/seed.hpp"

#include <algorithm>

namespace dbl {

namespace mp = boost::multiprecision;

static long to_long(const Rational& r, const char* what) {
    if (mp::denominator(r) != 1) throw DomainError(std::string(what) + " must be an integer, got " + rational_str(r));
    return static_cast<long>(mp::numerator(r));
}

static int sgn(long v) { return (v > 0) - (v < 0); }

// ---------------------------------------------------------------- Seed

Seed Seed::make(Matrix eps, std::vector<bool> frozen, std::vector<Rational> d) {
    Seed s;
    s.n = static_cast<int>(eps.size());
    s.eps = std::move(eps);
    s.frozen = frozen.empty() ? std::vector<bool>(s.n, false) : std::move(frozen);
    s.d = d.empty() ? std::vector<Rational>(s.n, Rational(1)) : std::move(d);
    s.validate();
    return s;
}

std::vector<int> Seed::unfrozen() const {
    std::vector<int> j;
    for (int i = 0; i < n; ++i)
        if (!frozen[i]) j.push_back(i);
    return j;
}

int Seed::position_in_unfrozen(int i) const {
    if (i < 0 || i >= n || frozen[i]) throw DomainError("index " + std::to_string(i + 1) + " is not an unfrozen index");
    int p = 0;
    for (int j = 0; j < i; ++j)
        if (!frozen[j]) ++p;
    return p;
}

long Seed::entry(int i, int j) const { return to_long(eps.at(i).at(j), "exchange entry"); }

void Seed::validate() const {
    if (static_cast<int>(frozen.size()) != n || static_cast<int>(d.size()) != n)
        throw DomainError("seed dimension mismatch");
    for (const auto& row : eps)
        if (static_cast<int>(row.size()) != n) throw DomainError("exchange matrix is not square");
    for (int i = 0; i < n; ++i) {
        if (d[i] <= 0) throw DomainError("skew-symmetrizer d_" + std::to_string(i + 1) + " must be positive");
        for (int j = 0; j < n; ++j) {
            if ((!frozen[i] || !frozen[j]) && mp::denominator(eps[i][j]) != 1)
                throw DomainError("exchange entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                  ") must be an integer");
            if (eps[i][j] / d[j] != -(eps[j][i] / d[i]))
                throw DomainError("exchange matrix is not skew-symmetrizable by d at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
        }
    }
}

Seed mutate_matrix(const Seed& s, int k) {
    if (k < 0 || k >= s.n) throw DomainError("mutation index out of range");
    if (s.frozen[k]) throw DomainError("cannot mutate at frozen index " + std::to_string(k + 1));
    Seed r = s;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            if (i == k || j == k) {
                r.eps[i][j] = -s.eps[i][j];
            } else {
                const Rational& a = s.eps[i][k];
                const Rational& b = s.eps[k][j];
                r.eps[i][j] = s.eps[i][j] + (mp::abs(a) * b + a * mp::abs(b)) / 2;
            }
        }
    return r;
}

Seed apply_word(const Seed& s, const std::vector<int>& word) {
    Seed r = s;
    for (int k : word) r = mutate_matrix(r, k);
    return r;
}

// ---------------------------------------------------------------- states

std::string kind_name(StateKind k) {
    switch (k) {
        case StateKind::A: return "A";
        case StateKind::X: return "X";
        case StateKind::D: return "D";
        case StateKind::TropA: return "a";
        case StateKind::TropX: return "x";
        case StateKind::TropD: return "d";
    }
    return "?";
}

StateKind parse_kind(const std::string& s) {
    if (s == "A") return StateKind::A;
    if (s == "X") return StateKind::X;
    if (s == "D") return StateKind::D;
    if (s == "a" || s == "trop-a") return StateKind::TropA;
    if (s == "x" || s == "trop-x") return StateKind::TropX;
    if (s == "d" || s == "trop-d") return StateKind::TropD;
    throw DomainError("unknown coordinate kind \"" + s + "\"");
}

bool ClusterState::operator==(const ClusterState& o) const {
    if (!(seed == o.seed) || kind != o.kind) return false;
    if (values.size() != o.values.size() || bvalues.size() != o.bvalues.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != o.values[i]) return false;
    for (std::size_t i = 0; i < bvalues.size(); ++i)
        if (bvalues[i] != o.bvalues[i]) return false;
    return tvalues == o.tvalues && tbvalues == o.tbvalues;
}

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> l;
    for (int i = 0; i < n; ++i) l.push_back(std::to_string(i + 1));
    return l;
}

ClusterState initial_state(const Seed& s, StateKind kind, const std::vector<std::string>& labels_in) {
    auto labels = labels_in.empty() ? default_labels(s.n) : labels_in;
    if (static_cast<int>(labels.size()) != s.n) throw DomainError("label count does not match seed");
    ClusterState st;
    st.seed = s;
    st.kind = kind;
    auto J = s.unfrozen();
    std::vector<std::string> names;
    switch (kind) {
        case StateKind::A: {
            for (int i = 0; i < s.n; ++i) names.push_back("A" + labels[i]);
            VarSet vs = make_vars(names);
            for (int i = 0; i < s.n; ++i) st.values.push_back(RationalExpr::variable(vs, i));
            break;
        }
        case StateKind::X: {
            for (int j : J) names.push_back("X" + labels[j]);
            VarSet vs = make_vars(names);
            for (std::size_t p = 0; p < J.size(); ++p) st.values.push_back(RationalExpr::variable(vs, p));
            break;
        }
        case StateKind::D: {
            for (int j : J) names.push_back("B" + labels[j]);
            for (int j : J) names.push_back("X" + labels[j]);
            VarSet vs = make_vars(names);
            for (std::size_t p = 0; p < J.size(); ++p) {
                st.bvalues.push_back(RationalExpr::variable(vs, p));
                st.values.push_back(RationalExpr::variable(vs, J.size() + p));
            }
            break;
        }
        default: throw DomainError("initial_state needs a symbolic kind");
    }
    return st;
}

ClusterState tropical_state(const Seed& s, StateKind kind, std::vector<Rational> v, std::vector<Rational> b) {
    ClusterState st;
    st.seed = s;
    st.kind = kind;
    std::size_t m = s.unfrozen().size();
    switch (kind) {
        case StateKind::TropA:
            if (v.size() != static_cast<std::size_t>(s.n)) throw DomainError("tropical a-coordinates must cover all of I");
            break;
        case StateKind::TropX:
            if (v.size() != m) throw DomainError("tropical x-coordinates must cover J");
            break;
        case StateKind::TropD:
            if (v.size() != m || b.size() != m) throw DomainError("tropical d-coordinates must cover J twice");
            break;
        default: throw DomainError("tropical_state needs a tropical kind");
    }
    st.tvalues = std::move(v);
    st.tbvalues = std::move(b);
    return st;
}

static RationalExpr one_like(const RationalExpr& r) { return RationalExpr::constant(r.vars(), 1); }

ClusterState mutate_state(const ClusterState& st, int k) {
    const Seed& s = st.seed;
    if (k < 0 || k >= s.n || s.frozen[k])
        throw DomainError("mutation index " + std::to_string(k + 1) + " invalid for kind " + kind_name(st.kind));
    ClusterState r = st;
    r.seed = mutate_matrix(s, k);
    auto J = s.unfrozen();
    int pk = s.position_in_unfrozen(k);
    switch (st.kind) {
        case StateKind::A: {
            RationalExpr pos = one_like(st.values[k]), neg = pos;
            for (int j = 0; j < s.n; ++j) {
                long e = s.entry(k, j);
                if (e > 0) pos = pos * st.values[j].pow(e);
                if (e < 0) neg = neg * st.values[j].pow(-e);
            }
            r.values[k] = (pos + neg) / st.values[k];
            break;
        }
        case StateKind::X:
        case StateKind::D: {
            const RationalExpr& Xk = st.values[pk];
            RationalExpr one = one_like(Xk);
            for (std::size_t p = 0; p < J.size(); ++p) {
                int i = J[p];
                if (i == k) {
                    r.values[p] = Xk.inverse();
                    continue;
                }
                long e = s.entry(i, k);
                if (e == 0) continue;
                RationalExpr f = one + (e > 0 ? Xk.inverse() : Xk);
                r.values[p] = st.values[p] * f.pow(-e);
            }
            if (st.kind == StateKind::D) {
                RationalExpr pos = Xk, neg = one;
                for (std::size_t p = 0; p < J.size(); ++p) {
                    long e = s.entry(k, J[p]);
                    if (e > 0) pos = pos * st.bvalues[p].pow(e);
                    if (e < 0) neg = neg * st.bvalues[p].pow(-e);
                }
                // One factor at a time keeps each cancellation small.
                r.bvalues[pk] = (pos + neg) / (one + Xk) / st.bvalues[pk];
            }
            break;
        }
        case StateKind::TropA: {
            Rational pos = 0, neg = 0;
            for (int j = 0; j < s.n; ++j) {
                long e = s.entry(k, j);
                if (e > 0) pos += e * st.tvalues[j];
                if (e < 0) neg -= e * st.tvalues[j];
            }
            r.tvalues[k] = std::max(pos, neg) - st.tvalues[k];
            break;
        }
        case StateKind::TropX:
        case StateKind::TropD: {
            const Rational xk = st.tvalues[pk];
            for (std::size_t p = 0; p < J.size(); ++p) {
                int i = J[p];
                if (i == k) {
                    r.tvalues[p] = -xk;
                    continue;
                }
                long e = s.entry(i, k);
                r.tvalues[p] = st.tvalues[p] - e * std::max(Rational(0), Rational(-sgn(e)) * xk);
            }
            if (st.kind == StateKind::TropD) {
                Rational pos = xk, neg = 0;
                for (std::size_t p = 0; p < J.size(); ++p) {
                    long e = s.entry(k, J[p]);
                    if (e > 0) pos += e * st.tbvalues[p];
                    if (e < 0) neg -= e * st.tbvalues[p];
                }
                r.tbvalues[pk] = std::max(pos, neg) - std::max(Rational(0), xk) - st.tbvalues[pk];
            }
            break;
        }
    }
    return r;
}

ClusterState mutate_state_word(ClusterState st, const std::vector<int>& word) {
    for (int k : word) st = mutate_state(st, k);
    return st;
}

// ---------------------------------------------------------------- Y-patterns

std::string semifield_name(Semifield s) {
    switch (s) {
        case Semifield::trop: return "trop";
        case Semifield::qsf: return "Q_sf";
        case Semifield::trivial: return "trivial";
    }
    return "?";
}

bool YSeed::operator==(const YSeed& o) const {
    if (semifield != o.semifield || b != o.b || x.size() != o.x.size() || y.size() != o.y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != o.x[i] || y[i] != o.y[i]) return false;
    return true;
}

std::vector<std::vector<long>> b_from_seed(const Seed& s) {
    auto J = s.unfrozen();
    std::vector<std::vector<long>> b(J.size(), std::vector<long>(J.size()));
    for (std::size_t i = 0; i < J.size(); ++i)
        for (std::size_t j = 0; j < J.size(); ++j) b[i][j] = s.entry(J[j], J[i]);
    return b;
}

static bool unit_monomial(const RationalExpr& v) { return v.is_monomial() && v.num().lead_coeff() == 1; }

void check_in_semifield(Semifield sf, const RationalExpr& v) {
    switch (sf) {
        case Semifield::trop:
            if (!unit_monomial(v)) throw DomainError("value " + v.str() + " is not in the tropical semifield");
            break;
        case Semifield::qsf:
            if (!v.subtraction_free() || v.is_zero())
                throw DomainError("value " + v.str() + " is not subtraction-free");
            break;
        case Semifield::trivial:
            if (!(v.is_laurent() && v.num().is_one())) throw DomainError("value " + v.str() + " is not in the trivial semifield");
            break;
    }
}

RationalExpr semifield_sum(Semifield sf, const RationalExpr& a, const RationalExpr& b) {
    switch (sf) {
        case Semifield::trop: {
            check_in_semifield(sf, a);
            check_in_semifield(sf, b);
            Exponent ea = a.num().lead_exponent(), eb = b.num().lead_exponent();
            for (std::size_t i = 0; i < ea.size(); ++i) ea[i] = std::min(ea[i], eb[i]);
            return RationalExpr(LaurentExpr::monomial(a.vars(), ea));
        }
        case Semifield::qsf: return a + b;
        case Semifield::trivial: return one_like(a);
    }
    throw DomainError("unknown semifield");
}

std::vector<std::vector<long>> mutate_b(const std::vector<std::vector<long>>& b, int k) {
    auto r = b;
    const int m = static_cast<int>(b.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == k || j == k) r[i][j] = -b[i][j];
            else r[i][j] = b[i][j] + (std::abs(b[i][k]) * b[k][j] + b[i][k] * std::abs(b[k][j])) / 2;
        }
    return r;
}

YSeed mutate_with_coefficients(const YSeed& ys, int k) {
    const int m = static_cast<int>(ys.b.size());
    if (k < 0 || k >= m) throw DomainError("mutation index out of range");
    for (const auto& v : ys.y) check_in_semifield(ys.semifield, v);
    YSeed r = ys;
    r.b = mutate_b(ys.b, k);
    const RationalExpr& yk = ys.y[k];
    RationalExpr one = one_like(yk);
    RationalExpr yk1 = semifield_sum(ys.semifield, yk, one);
    for (int j = 0; j < m; ++j) {
        if (j == k) {
            r.y[j] = yk.inverse();
            continue;
        }
        long bkj = ys.b[k][j];
        if (bkj == 0) continue;
        r.y[j] = ys.y[j] * yk.pow(std::max(bkj, 0L)) * yk1.pow(-bkj);
    }
    RationalExpr pos = yk, neg = one;
    for (int i = 0; i < m; ++i) {
        long e = ys.b[i][k];
        if (e > 0) pos = pos * ys.x[i].pow(e);
        if (e < 0) neg = neg * ys.x[i].pow(-e);
    }
    r.x[k] = (pos + neg) / (yk1 * ys.x[k]);
    return r;
}

RationalExpr semifield_eval(Semifield sf, const LaurentExpr& f, const std::vector<RationalExpr>& at, const VarSet& target) {
    if (!f.all_positive() || f.is_zero()) throw DomainError("semifield evaluation needs a subtraction-free polynomial");
    switch (sf) {
        case Semifield::qsf: return substitute_monomial(RationalExpr(f), at, target);
        case Semifield::trivial: return RationalExpr::constant(target, 1);
        case Semifield::trop: {
            std::optional<Exponent> best;
            for (const auto& [e, c] : f.terms()) {
                Exponent acc(target->size());
                for (std::size_t i = 0; i < e.size(); ++i) {
                    if (e[i].is_zero()) continue;
                    check_in_semifield(sf, at[i]);
                    const Exponent& ai = at[i].num().lead_exponent();
                    for (std::size_t j = 0; j < acc.size(); ++j)
                        acc[j] += HalfInt::from_twice(ai[j].twice_value * e[i].to_int());
                }
                if (!best) best = acc;
                else
                    for (std::size_t j = 0; j < acc.size(); ++j) (*best)[j] = std::min((*best)[j], acc[j]);
            }
            return RationalExpr(LaurentExpr::monomial(target, *best));
        }
    }
    throw DomainError("unknown semifield");
}

YSeed yseed_from_d_state(const ClusterState& d) {
    if (d.kind != StateKind::D) throw DomainError("expected a D-kind state");
    YSeed ys;
    ys.semifield = Semifield::qsf;
    ys.b = b_from_seed(d.seed);
    ys.x = d.bvalues;
    ys.y = d.values;
    ys.ambient = d.values.empty() ? make_vars({}) : d.values[0].vars();
    return ys;
}

// ---------------------------------------------------------------- principal runs

static VariableRecord make_record(const PrincipalRun& run, int step, int position, const RationalExpr& v) {
    if (!v.is_laurent()) throw DomainError("cluster variable is not a Laurent polynomial: " + v.str());
    const std::size_t m = run.b0.size();
    VariableRecord rec;
    rec.step = step;
    rec.position = position;
    rec.xpoly = v.num();
    std::vector<LaurentExpr> images;
    for (std::size_t i = 0; i < m; ++i) images.push_back(LaurentExpr::constant(run.yvars, 1));
    for (std::size_t j = 0; j < m; ++j) images.push_back(LaurentExpr::variable(run.yvars, j));
    rec.fpoly = substitute_laurent(rec.xpoly, images, run.yvars);
    std::optional<std::vector<long>> deg;
    for (const auto& [e, c] : rec.xpoly.terms()) {
        if (c < 0) throw DomainError("X-polynomial has a negative coefficient");
        std::vector<long> d(m);
        for (std::size_t i = 0; i < m; ++i) {
            d[i] = e[i].to_int();
            for (std::size_t j = 0; j < m; ++j) d[i] -= e[m + j].to_int() * run.b0[i][j];
        }
        if (!deg) deg = d;
        else if (*deg != d) throw DomainError("inhomogeneous X-polynomial " + rec.xpoly.str());
    }
    rec.g = *deg;
    return rec;
}

PrincipalRun principal_run(const Seed& s, const std::vector<int>& word) {
    PrincipalRun run;
    run.seed = s;
    run.word = word;
    auto J = s.unfrozen();
    const std::size_t m = J.size();
    auto labels = default_labels(s.n);
    std::vector<std::string> names, ynames;
    for (int j : J) names.push_back("x" + labels[j]);
    for (int j : J) ynames.push_back("y" + labels[j]);
    run.yvars = make_vars(ynames);
    names.insert(names.end(), ynames.begin(), ynames.end());
    run.xy = make_vars(names);
    run.b0 = b_from_seed(s);

    YSeed ys;
    ys.semifield = Semifield::trop;
    ys.b = run.b0;
    ys.ambient = run.xy;
    for (std::size_t p = 0; p < m; ++p) {
        ys.x.push_back(RationalExpr::variable(run.xy, p));
        ys.y.push_back(RationalExpr::variable(run.xy, m + p));
    }
    for (std::size_t p = 0; p < m; ++p) run.history.push_back(make_record(run, 0, static_cast<int>(p), ys.x[p]));
    int step = 0;
    for (int k : word) {
        int p = s.position_in_unfrozen(k);
        ys = mutate_with_coefficients(ys, p);
        run.history.push_back(make_record(run, ++step, p, ys.x[p]));
    }
    for (std::size_t p = 0; p < m; ++p) run.cluster.push_back(make_record(run, step, static_cast<int>(p), ys.x[p]));
    run.final_b = ys.b;
    for (const auto& y : ys.y) {
        std::vector<long> c;
        const Exponent& e = y.num().lead_exponent();
        for (std::size_t j = 0; j < m; ++j) c.push_back(e[m + j].to_int());
        run.c_vectors.push_back(c);
    }
    return run;
}

RationalExpr separation_reconstruct(const PrincipalRun& run, int l, Semifield sf, const std::vector<RationalExpr>& x0,
                                    const std::vector<RationalExpr>& y0) {
    const std::size_t m = run.b0.size();
    if (l < 0 || l >= static_cast<int>(m)) throw DomainError("variable position out of range");
    if (x0.size() != m || y0.size() != m) throw DomainError("initial values have the wrong dimension");
    VarSet target = x0.empty() ? make_vars({}) : x0[0].vars();
    for (const auto& y : y0) check_in_semifield(sf, y);
    const VariableRecord& rec = run.cluster[l];
    std::vector<RationalExpr> yhat;
    for (std::size_t j = 0; j < m; ++j) {
        RationalExpr v = y0[j];
        for (std::size_t i = 0; i < m; ++i)
            if (run.b0[i][j] != 0) v = v * x0[i].pow(run.b0[i][j]);
        yhat.push_back(v);
    }
    RationalExpr num = substitute_monomial(RationalExpr(rec.fpoly), yhat, target);
    RationalExpr den = semifield_eval(sf, rec.fpoly, y0, target);
    RationalExpr out = num / den;
    for (std::size_t i = 0; i < m; ++i)
        if (rec.g[i] != 0) out = out * x0[i].pow(rec.g[i]);
    return out;
}

// ---------------------------------------------------------------- canonical maps

std::vector<RationalExpr> p_map(const Seed& s, const std::vector<RationalExpr>& a) {
    if (static_cast<int>(a.size()) != s.n) throw DomainError("p needs one A-coordinate per index");
    std::vector<RationalExpr> out;
    for (int i : s.unfrozen()) {
        RationalExpr v = one_like(a[0]);
        for (int j = 0; j < s.n; ++j) {
            long e = s.entry(i, j);
            if (e != 0) v = v * a[j].pow(e);
        }
        out.push_back(v);
    }
    return out;
}

DPoint phi_map(const Seed& s, const std::vector<RationalExpr>& a, const std::vector<RationalExpr>& a_circ) {
    if (static_cast<int>(a.size()) != s.n || static_cast<int>(a_circ.size()) != s.n)
        throw DomainError("phi needs two A-points of full dimension");
    DPoint p;
    for (int i : s.unfrozen()) p.b.push_back(a_circ[i] / a[i]);
    p.x = p_map(s, a);
    return p;
}

std::pair<std::vector<RationalExpr>, std::vector<RationalExpr>> pi_map(const Seed& s, const DPoint& p) {
    auto J = s.unfrozen();
    if (p.b.size() != J.size() || p.x.size() != J.size()) throw DomainError("pi needs B and X over the unfrozen indices");
    std::vector<RationalExpr> hat;
    for (std::size_t q = 0; q < J.size(); ++q) {
        RationalExpr v = p.x[q];
        for (std::size_t r = 0; r < J.size(); ++r) {
            long e = s.entry(J[q], J[r]);
            if (e != 0) v = v * p.b[r].pow(e);
        }
        hat.push_back(v);
    }
    return {p.x, hat};
}

std::vector<Rational> p_map_trop(const Seed& s, const std::vector<Rational>& a) {
    if (static_cast<int>(a.size()) != s.n) throw DomainError("p needs one a-coordinate per index");
    std::vector<Rational> out;
    for (int i : s.unfrozen()) {
        Rational v = 0;
        for (int j = 0; j < s.n; ++j) v += s.entry(i, j) * a[j];
        out.push_back(v);
    }
    return out;
}

}  // namespace dbl
