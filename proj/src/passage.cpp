#include "lpplab/passage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace lpplab {

namespace detail {

namespace {
std::atomic<long long> g_live{0};
std::atomic<long long> g_peak{0};
}  // namespace

void alloc_acquire(std::size_t doubles) noexcept {
    const long long live = g_live.fetch_add(static_cast<long long>(doubles)) +
                           static_cast<long long>(doubles);
    long long peak = g_peak.load();
    while (live > peak && !g_peak.compare_exchange_weak(peak, live)) {
    }
}

void alloc_release(std::size_t doubles) noexcept { g_live.fetch_sub(static_cast<long long>(doubles)); }

void alloc_reset() noexcept {
    g_live.store(0);
    g_peak.store(0);
}

long long alloc_peak_doubles() noexcept { return g_peak.load(); }

}  // namespace detail

namespace {

using std::int64_t;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kBaseCells = 1u << 16;  // full-table threshold for path reconstruction

/// std::vector<double> that reports its size to the working-memory counter.
struct CountedVec {
    std::vector<double> v;

    explicit CountedVec(std::size_t n, double fill = 0.0) : v(n, fill) {
        detail::alloc_acquire(n);
    }
    ~CountedVec() { detail::alloc_release(v.size()); }
    CountedVec(const CountedVec&) = delete;
    CountedVec& operator=(const CountedVec&) = delete;

    double& operator[](std::size_t i) { return v[i]; }
    const double& operator[](std::size_t i) const { return v[i]; }
};

int64_t floor_div2(int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
int64_t ceil_div2(int64_t a) { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }

struct Box {
    Point u, v;

    int64_t xlo(int64_t ph) const { return std::max(u.x, ph - v.y); }
    int64_t xhi(int64_t ph) const { return std::min(v.x, ph - u.y); }
    std::size_t width() const { return static_cast<std::size_t>(v.x - u.x + 1); }
    std::size_t area() const {
        return static_cast<std::size_t>(v.x - u.x + 1) * static_cast<std::size_t>(v.y - u.y + 1);
    }
};

/// x-range of cells at level ph inside box and region. `exact` reports whether
/// the range already encodes membership (true) or a per-cell contains() check
/// is still required (false).
struct LevelRange {
    int64_t lo, hi;
    bool exact;
};

LevelRange level_range(const Box& box, const Region* region, int64_t ph) {
    LevelRange r{box.xlo(ph), box.xhi(ph), true};
    if (!region) return r;
    if (auto iv = region->psi_interval(ph)) {
        // psi = ph - 2x is decreasing in x
        const PsiInterval box_psi{ph - 2 * r.hi, ph - 2 * r.lo};
        const PsiInterval clip = iv->clipped(box_psi);
        if (clip.empty()) return {int64_t{1}, int64_t{0}, true};
        r.lo = std::max(r.lo, ceil_div2(ph - clip.hi));
        r.hi = std::min(r.hi, floor_div2(ph - clip.lo));
        return r;
    }
    r.exact = false;
    return r;
}

/// Per-cell weight evaluator with an inlined path for plain Exp(1) fields.
/// The enclosing box's corners are range-checked once by the callers, which
/// covers every interior cell.
struct CellEval {
    const WeightField& field;
    std::uint64_t stream = 0;
    bool plain = false;

    explicit CellEval(const WeightField& f) : field(f) {
        if (auto s = f.plain_stream()) {
            stream = *s;
            plain = true;
        }
    }

    double operator()(int64_t x, int64_t y) const {
        if (plain) {
            return -std::log1p(-rng::to_unit(rng::counter_bits(stream, x, y)));
        }
        return field.weight_at(Point{x, y});
    }
};

/// Forward frontier sweep over [u, stop_level], storing endpoint-inclusive
/// values g (max passage into the cell, cell's own weight included). Returns
/// the valid x-range at stop_level. Invalid or unreachable cells hold -inf.
LevelRange forward_sweep(const WeightField& field, const Box& box, const Region* region,
                         int64_t stop_level, CountedVec& g) {
    const CellEval weight(field);
    const int64_t base = box.u.x;
    double* gv = g.v.data();
    LevelRange prev = level_range(box, region, phi(box.u));
    {
        const bool ok = prev.lo <= prev.hi && (prev.exact || region->contains(box.u));
        if (prev.lo <= prev.hi) gv[box.u.x - base] = ok ? weight(box.u.x, box.u.y) : kNegInf;
    }
    for (int64_t ph = phi(box.u) + 1; ph <= stop_level; ++ph) {
        LevelRange cur = level_range(box, region, ph);
        if (cur.lo > cur.hi) {
            if (region) return cur;  // region slice empty: nothing reachable beyond
            cur = {box.xlo(ph), box.xhi(ph), true};
        }
        // cells whose two predecessors are both in the previous range
        const int64_t safe_lo = std::max(cur.lo, prev.lo + 1);
        const int64_t safe_hi = std::min(cur.hi, prev.hi);
        auto generic = [&](int64_t x) {
            const double below = (x >= prev.lo && x <= prev.hi) ? gv[x - base] : kNegInf;
            const double left =
                (x - 1 >= prev.lo && x - 1 <= prev.hi) ? gv[x - 1 - base] : kNegInf;
            double val = below >= left ? below : left;
            if (val != kNegInf) {
                if (!cur.exact && !region->contains(Point{x, ph - x})) {
                    val = kNegInf;
                } else {
                    val += weight(x, ph - x);
                }
            }
            gv[x - base] = val;
        };
        int64_t x = cur.hi;
        for (; x > safe_hi; --x) generic(x);
        if (cur.exact) {
            for (; x >= safe_lo; --x) {
                const double below = gv[x - base];
                const double left = gv[x - 1 - base];
                gv[x - base] = (below >= left ? below : left) + weight(x, ph - x);
            }
        } else {
            for (; x >= safe_lo; --x) generic(x);
        }
        for (; x >= cur.lo; --x) generic(x);
        prev = cur;
    }
    return prev;
}

/// Backward frontier sweep from v down to stop_level, storing values that
/// exclude both the cell itself and v. `w` is scratch of the same width.
LevelRange backward_sweep(const WeightField& field, const Box& box, int64_t stop_level,
                          CountedVec& bk, CountedVec& w) {
    const CellEval weight(field);
    const int64_t base = box.u.x;
    double* bv = bk.v.data();
    double* wv = w.v.data();
    LevelRange prev{box.v.x, box.v.x, true};
    bv[box.v.x - base] = 0.0;
    for (int64_t ph = phi(box.v) - 1; ph >= stop_level; --ph) {
        const bool top = (ph + 1 == phi(box.v));
        for (int64_t sx = prev.lo; sx <= prev.hi; ++sx) {
            wv[sx - base] = top ? 0.0 : weight(sx, ph + 1 - sx);
        }
        const LevelRange cur{box.xlo(ph), box.xhi(ph), true};
        const int64_t safe_lo = std::max(cur.lo, prev.lo);
        const int64_t safe_hi = std::min(cur.hi, prev.hi - 1);
        auto generic = [&](int64_t x) {
            const int64_t i = x - base;
            const double up = (x >= prev.lo && x <= prev.hi) ? bv[i] + wv[i] : kNegInf;
            const double right =
                (x + 1 >= prev.lo && x + 1 <= prev.hi) ? bv[i + 1] + wv[i + 1] : kNegInf;
            bv[i] = up >= right ? up : right;
        };
        int64_t x = cur.lo;
        for (; x < safe_lo; ++x) generic(x);
        for (; x <= safe_hi; ++x) {
            const int64_t i = x - base;
            const double up = bv[i] + wv[i];
            const double right = bv[i + 1] + wv[i + 1];
            bv[i] = up >= right ? up : right;
        }
        for (; x <= cur.hi; ++x) generic(x);
        prev = cur;
    }
    return prev;
}

/// Full ragged table of endpoint-inclusive values for small or constrained
/// boxes; supports exact backtracking with the from-below tie preference.
class TableDP {
public:
    TableDP(const WeightField& field, const Box& box, const Region* region)
        : field_(field), box_(box), region_(region) {
        const int64_t levels = phi(box.v) - phi(box.u) + 1;
        ranges_.reserve(static_cast<std::size_t>(levels));
        offsets_.reserve(static_cast<std::size_t>(levels) + 1);
        std::size_t total = 0;
        for (int64_t k = 0; k < levels; ++k) {
            LevelRange r = level_range(box, region, phi(box.u) + k);
            offsets_.push_back(total);
            if (r.lo <= r.hi) total += static_cast<std::size_t>(r.hi - r.lo + 1);
            ranges_.push_back(r);
        }
        offsets_.push_back(total);
        g_ = std::make_unique<CountedVec>(total, kNegInf);
        fill();
    }

    double value_at(Point p) const {
        const std::size_t k = static_cast<std::size_t>(phi(p) - phi(box_.u));
        if (k >= ranges_.size()) return kNegInf;
        const LevelRange& r = ranges_[k];
        if (p.x < r.lo || p.x > r.hi) return kNegInf;
        return (*g_)[offsets_[k] + static_cast<std::size_t>(p.x - r.lo)];
    }

    /// Passage time u -> v under the endpoint convention (v's weight unread).
    double terminal_value() const {
        if (box_.u == box_.v) return 0.0;
        const double below = value_at(Point{box_.v.x, box_.v.y - 1});
        const double left = value_at(Point{box_.v.x - 1, box_.v.y});
        return below >= left ? below : left;
    }

    /// Backtrack from v; at exact ties the predecessor from below wins.
    std::vector<Point> backtrack() const {
        std::vector<Point> path;
        path.reserve(static_cast<std::size_t>(phi(box_.v) - phi(box_.u)) + 1);
        Point c = box_.v;
        path.push_back(c);
        while (!(c == box_.u)) {
            const Point below{c.x, c.y - 1};
            const Point left{c.x - 1, c.y};
            const double gb = value_at(below);
            const double gl = value_at(left);
            c = (gb >= gl) ? below : left;
            path.push_back(c);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

private:
    void fill() {
        const CellEval weight(field_);
        const int64_t levels = phi(box_.v) - phi(box_.u) + 1;
        {
            const LevelRange& r0 = ranges_[0];
            const bool ok =
                r0.lo <= r0.hi && (r0.exact || region_->contains(box_.u));
            if (ok) (*g_)[offsets_[0]] = weight(box_.u.x, box_.u.y);
        }
        for (int64_t k = 1; k < levels; ++k) {
            const LevelRange& r = ranges_[static_cast<std::size_t>(k)];
            const LevelRange& rp = ranges_[static_cast<std::size_t>(k - 1)];
            if (r.lo > r.hi) continue;
            const int64_t ph = phi(box_.u) + k;
            double* row = g_->v.data() + offsets_[static_cast<std::size_t>(k)];
            const double* prow = g_->v.data() + offsets_[static_cast<std::size_t>(k - 1)];
            auto generic = [&](int64_t x) {
                const double below = (x >= rp.lo && x <= rp.hi) ? prow[x - rp.lo] : kNegInf;
                const double left =
                    (x - 1 >= rp.lo && x - 1 <= rp.hi) ? prow[x - 1 - rp.lo] : kNegInf;
                double val = below >= left ? below : left;
                if (val != kNegInf) {
                    if (!r.exact && !region_->contains(Point{x, ph - x})) {
                        val = kNegInf;
                    } else {
                        val += weight(x, ph - x);
                    }
                }
                row[x - r.lo] = val;
            };
            const int64_t safe_lo = std::max(r.lo, rp.lo + 1);
            const int64_t safe_hi = std::min(r.hi, rp.hi);
            int64_t x = r.lo;
            for (; x < safe_lo && x <= r.hi; ++x) generic(x);
            if (r.exact) {
                for (; x <= safe_hi; ++x) {
                    const double below = prow[x - rp.lo];
                    const double left = prow[x - 1 - rp.lo];
                    row[x - r.lo] = (below >= left ? below : left) + weight(x, ph - x);
                }
            } else {
                for (; x <= safe_hi; ++x) generic(x);
            }
            for (; x <= r.hi; ++x) generic(x);
        }
    }

    const WeightField& field_;
    Box box_;
    const Region* region_;
    std::vector<LevelRange> ranges_;
    std::vector<std::size_t> offsets_;
    std::unique_ptr<CountedVec> g_;
};

/// Appends the geodesic vertices of [a, b) to `out` via midline splitting.
void assemble_geodesic(const WeightField& field, Point a, Point b, std::vector<Point>& out) {
    if (a == b) return;
    const Box box{a, b};
    if (box.area() <= kBaseCells) {
        TableDP table(field, box, nullptr);
        std::vector<Point> part = table.backtrack();
        out.insert(out.end(), part.begin(), part.end() - 1);
        return;
    }
    const int64_t mid = phi(a) + (phi(b) - phi(a)) / 2;
    int64_t best_x;
    {  // frontier buffers die before the recursion so peak memory stays O(width)
        CountedVec fwd(box.width(), kNegInf);
        const LevelRange fr = forward_sweep(field, box, nullptr, mid, fwd);
        CountedVec bwd(box.width(), kNegInf);
        CountedVec scratch(box.width(), 0.0);
        const LevelRange br = backward_sweep(field, box, mid, bwd, scratch);

        const int64_t lo = std::max(fr.lo, br.lo);
        const int64_t hi = std::min(fr.hi, br.hi);
        best_x = lo;
        double best = kNegInf;
        for (int64_t x = lo; x <= hi; ++x) {
            const std::size_t i = static_cast<std::size_t>(x - a.x);
            const double total = fwd[i] + bwd[i];
            if (total > best || (total == best && x > best_x)) {  // tie: smaller psi
                best = total;
                best_x = x;
            }
        }
    }
    const Point w{best_x, mid - best_x};
    assemble_geodesic(field, a, w, out);
    assemble_geodesic(field, w, b, out);
}

double canonical_path_time(const WeightField& field, const std::vector<Point>& vertices) {
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        t += field.weight_at(vertices[i]);
    }
    return t;
}

/// True if candidate beats incumbent under the shared tie-break: larger time,
/// or equal time and smaller psi at the last differing vertex.
bool path_beats(double cand_time, const std::vector<Point>& cand, double best_time,
                const std::vector<Point>& best) {
    if (cand_time != best_time) return cand_time > best_time;
    for (std::size_t k = cand.size(); k-- > 0;) {
        if (!(cand[k] == best[k])) return psi(cand[k]) < psi(best[k]);
    }
    return false;
}

}  // namespace

double last_passage_time(const WeightField& field, Point u, Point v) {
    require_in_range(u);
    require_in_range(v);
    require_ordered(u, v);
    if (u == v) return 0.0;
    const Box box{u, v};
    CountedVec g(box.width(), kNegInf);
    const LevelRange r = forward_sweep(field, box, nullptr, phi(v) - 1, g);
    const double below = (v.x >= r.lo && v.x <= r.hi) ? g[static_cast<std::size_t>(v.x - u.x)]
                                                      : kNegInf;
    const double left = (v.x - 1 >= r.lo && v.x - 1 <= r.hi)
                            ? g[static_cast<std::size_t>(v.x - 1 - u.x)]
                            : kNegInf;
    return below >= left ? below : left;
}

GeodesicPath geodesic(const WeightField& field, Point u, Point v) {
    require_in_range(u);
    require_in_range(v);
    require_ordered(u, v);
    GeodesicPath path;
    path.vertices.reserve(static_cast<std::size_t>(phi(v) - phi(u)) + 1);
    assemble_geodesic(field, u, v, path.vertices);
    path.vertices.push_back(v);
    path.passage_time = canonical_path_time(field, path.vertices);
    return path;
}

std::optional<std::pair<double, GeodesicPath>> constrained_passage(const WeightField& field,
                                                                   Point u, Point v,
                                                                   const Region& region) {
    require_in_range(u);
    require_in_range(v);
    require_ordered(u, v);
    if (!region.contains(u) || !region.contains(v)) return std::nullopt;
    if (u == v) return std::make_pair(0.0, GeodesicPath{{u}, 0.0});
    TableDP table(field, Box{u, v}, &region);
    const double t = table.terminal_value();
    if (t == kNegInf) return std::nullopt;
    GeodesicPath path{table.backtrack(), t};
    return std::make_pair(t, std::move(path));
}

std::pair<double, GeodesicPath> discounted_passage(const WeightField& field, Point u, Point v,
                                                   const Region& discount) {
    const WeightField discounted = field.with_discount(discount);
    GeodesicPath path = geodesic(discounted, u, v);
    return {path.passage_time, std::move(path)};
}

std::uint64_t path_count(Point u, Point v) {
    require_ordered(u, v);
    const std::uint64_t cap = std::uint64_t{1} << 62;
    const std::uint64_t n = static_cast<std::uint64_t>(phi(v) - phi(u));
    const std::uint64_t k =
        static_cast<std::uint64_t>(std::min(v.x - u.x, v.y - u.y));
    unsigned __int128 res = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        res = res * (n - k + i) / i;
        if (res > cap) return cap;
    }
    return static_cast<std::uint64_t>(res);
}

std::optional<std::pair<double, GeodesicPath>> brute_force_passage(
    const WeightField& field, Point u, Point v, const std::optional<Region>& region,
    const std::optional<Region>& discount) {
    require_in_range(u);
    require_in_range(v);
    require_ordered(u, v);
    if (path_count(u, v) > 1'000'000) {
        throw DomainError("instance too large for exhaustive enumeration");
    }
    const WeightField eff = discount ? field.with_discount(*discount) : field;
    if (region && (!region->contains(u) || !region->contains(v))) return std::nullopt;

    std::vector<Point> cur;
    cur.reserve(static_cast<std::size_t>(phi(v) - phi(u)) + 1);
    std::vector<Point> best_path;
    double best_time = kNegInf;

    auto admissible = [&](Point p) {
        return leq(u, p) && leq(p, v) && (!region || region->contains(p));
    };
    auto dfs = [&](auto&& self, Point c, double prefix) -> void {
        cur.push_back(c);
        if (c == v) {
            if (best_path.empty() || path_beats(prefix, cur, best_time, best_path)) {
                best_time = prefix;
                best_path = cur;
            }
        } else {
            const double w = eff.weight_at(c);
            const Point right{c.x + 1, c.y};
            const Point up{c.x, c.y + 1};
            if (admissible(right)) self(self, right, prefix + w);
            if (admissible(up)) self(self, up, prefix + w);
        }
        cur.pop_back();
    };
    dfs(dfs, u, 0.0);
    if (best_path.empty()) return std::nullopt;
    GeodesicPath path{std::move(best_path), best_time};
    return std::make_pair(best_time, std::move(path));
}

}  // namespace lpplab
