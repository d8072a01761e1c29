#include "coliseum/markov.hpp"

#include "coliseum/nn.hpp"
#include "coliseum/par.hpp"
#include "coliseum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace coliseum {

double Raster::max_width() const {
    double w = 0.0;
    for (const auto& c : cells) w = std::max(w, c.width());
    return w;
}

namespace {

struct TreeAccumulator {
    double escaped = 0.0;
    double slack = 0.0;
};

void expand_tree(cplx z, double mass, int depth_left, const RandomModel& model,
                 const EscapeParams& params, const TreeParams& tree, TreeAccumulator& acc) {
    if (std::abs(z) > params.radius) {
        acc.escaped += mass;
        return;
    }
    if (params.trapped(model.system(), z)) return; // exact 0 contribution
    if (mass < tree.prune_mass || depth_left == 0) {
        acc.slack += mass;
        return;
    }
    for (size_t j = 0; j < model.size(); ++j)
        expand_tree(model.system().generator(j)(z), mass * model.weights()[j], depth_left - 1,
                    model, params, tree, acc);
}

} // namespace

Interval t_infinity_exact(cplx z, const RandomModel& model, const EscapeParams& params,
                          const TreeParams& tree) {
    TreeAccumulator acc;
    expand_tree(z, 1.0, tree.depth, model, params, tree, acc);
    return {acc.escaped, std::min(1.0, acc.escaped + acc.slack)};
}

TMcResult t_infinity_mc(cplx z, const RandomModel& model, const EscapeParams& params,
                        uint64_t trials, uint64_t rng_seed, int max_depth,
                        double indeterminate_threshold) {
    uint64_t escaped = 0, undecided = 0;
    Rng rng(rng_seed);
    const auto& weights = model.weights();
    for (uint64_t t = 0; t < trials; ++t) {
        cplx w = z;
        bool resolved = false;
        for (int k = 0; k <= max_depth; ++k) {
            if (std::abs(w) > params.radius) {
                ++escaped;
                resolved = true;
                break;
            }
            if (params.trapped(model.system(), w)) {
                resolved = true;
                break;
            }
            if (k == max_depth) break;
            w = model.system().generator(rng.next_weighted(weights))(w);
        }
        if (!resolved) ++undecided;
    }
    TMcResult out;
    double p = double(escaped) / double(trials);
    out.estimate = p;
    out.stderr_ = std::sqrt(p * (1.0 - p) / double(trials));
    out.indeterminate = double(undecided) / double(trials);
    out.flagged = out.indeterminate > indeterminate_threshold;
    return out;
}

Raster t_raster(const RandomModel& model, const EscapeParams& params, double xmin,
                double xmax, double ymin, double ymax, int nx, int ny,
                const TreeParams& tree, int threads) {
    Raster r;
    r.xmin = xmin;
    r.xmax = xmax;
    r.ymin = ymin;
    r.ymax = ymax;
    r.nx = nx;
    r.ny = ny;
    r.cells.resize(size_t(nx) * ny);
    parallel_for(size_t(ny), threads, [&](size_t iy) {
        for (int ix = 0; ix < nx; ++ix)
            r.at(ix, int(iy)) = t_infinity_exact(r.center(ix, int(iy)), model, params, tree);
    });
    return r;
}

namespace {

struct Bilinear {
    Interval value;
    double oscillation; // max hi - min lo over the stencil
};

Bilinear interpolate(const Raster& r, cplx w) {
    double dx = (r.xmax - r.xmin) / r.nx;
    double dy = (r.ymax - r.ymin) / r.ny;
    double fx = (w.real() - r.xmin) / dx - 0.5;
    double fy = (w.imag() - r.ymin) / dy - 0.5;
    int ix = int(std::floor(fx));
    int iy = int(std::floor(fy));
    double tx = fx - ix, ty = fy - iy;
    if (ix < 0) { ix = 0; tx = 0.0; }
    if (iy < 0) { iy = 0; ty = 0.0; }
    if (ix > r.nx - 2) { ix = r.nx - 2; tx = 1.0; }
    if (iy > r.ny - 2) { iy = r.ny - 2; ty = 1.0; }
    const Interval& c00 = r.at(ix, iy);
    const Interval& c10 = r.at(ix + 1, iy);
    const Interval& c01 = r.at(ix, iy + 1);
    const Interval& c11 = r.at(ix + 1, iy + 1);
    auto blend = [&](double a, double b, double c, double d) {
        return (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * c + tx * d);
    };
    Bilinear out;
    out.value = {blend(c00.lo, c10.lo, c01.lo, c11.lo), blend(c00.hi, c10.hi, c01.hi, c11.hi)};
    double max_hi = std::max({c00.hi, c10.hi, c01.hi, c11.hi});
    double min_lo = std::min({c00.lo, c10.lo, c01.lo, c11.lo});
    out.oscillation = max_hi - min_lo;
    return out;
}

} // namespace

MTauResult m_tau_apply(const Raster& raster, const RandomModel& model,
                       const EscapeParams& params, int threads) {
    MTauResult out;
    out.raster = raster;
    std::vector<int> unresolved_per_row(raster.ny, 0);
    std::vector<double> modulus_per_row(raster.ny, 0.0);
    parallel_for(size_t(raster.ny), threads, [&](size_t iy) {
        for (int ix = 0; ix < raster.nx; ++ix) {
            cplx z = raster.center(ix, int(iy));
            double lo = 0.0, hi = 0.0;
            for (size_t j = 0; j < model.size(); ++j) {
                double p = model.weights()[j];
                cplx w = model.system().generator(j)(z);
                Interval term;
                if (raster.inside(w)) {
                    Bilinear b = interpolate(raster, w);
                    term = b.value;
                    modulus_per_row[iy] = std::max(modulus_per_row[iy], b.oscillation);
                } else if (std::abs(w) > params.radius) {
                    term = Interval::exact(1.0);
                } else if (params.trapped(model.system(), w)) {
                    term = Interval::exact(0.0);
                } else {
                    term = Interval::unknown();
                    ++unresolved_per_row[iy];
                }
                lo += p * term.lo;
                hi += p * term.hi;
            }
            out.raster.at(ix, int(iy)) = {lo, hi};
        }
    });
    out.unresolved_lookups =
        std::accumulate(unresolved_per_row.begin(), unresolved_per_row.end(), 0);
    out.interpolation_modulus = *std::max_element(modulus_per_row.begin(), modulus_per_row.end());
    return out;
}

int MinimalSetReport::minimal_count() const {
    int n = 0;
    for (const auto& c : clusters) n += c.minimal ? 1 : 0;
    return n;
}

int MinimalSetReport::period_sum() const {
    int n = 0;
    for (const auto& c : clusters) n += c.minimal ? c.period : 0;
    return n;
}

namespace {

// Strongly connected components by Kosaraju; cluster graphs have at most a
// few hundred nodes.
std::vector<int> scc_labels(const std::vector<std::vector<int>>& adj) {
    int n = int(adj.size());
    std::vector<std::vector<int>> radj(n);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) radj[v].push_back(u);

    std::vector<int> order;
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, size_t>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [u, i] = stack.back();
            if (i < adj[u].size()) {
                int v = adj[u][i++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<int> label(n, -1);
    int comp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (label[*it] != -1) continue;
        std::vector<int> stack{*it};
        label[*it] = comp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : radj[u])
                if (label[v] == -1) {
                    label[v] = comp;
                    stack.push_back(v);
                }
        }
        ++comp;
    }
    return label;
}

// Cyclic period of a strongly connected component: gcd of d(u) + 1 - d(v)
// over its internal edges, with d a BFS layering.
int scc_period(const std::vector<int>& nodes, const std::vector<std::vector<int>>& adj,
               const std::vector<int>& label) {
    if (nodes.empty()) return 0;
    int comp = label[nodes[0]];
    std::map<int, int> depth;
    std::vector<int> queue{nodes[0]};
    depth[nodes[0]] = 0;
    size_t head = 0;
    while (head < queue.size()) {
        int u = queue[head++];
        for (int v : adj[u]) {
            if (label[v] != comp) continue;
            if (!depth.count(v)) {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    int g = 0;
    for (int u : nodes)
        for (int v : adj[u])
            if (label[v] == comp) g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
    return g == 0 ? 1 : g;
}

} // namespace

MinimalSetReport minimal_sets(const RandomModel& model, const std::vector<cplx>& seeds,
                              const EscapeParams& params, const MinimalSetOptions& opts) {
    MinimalSetReport report;
    if (seeds.empty()) throw std::invalid_argument("minimal_sets needs at least one seed");

    std::vector<cplx> samples;
    bool any_escaped = false;
    const auto& weights = model.weights();
    for (size_t s = 0; s < seeds.size(); ++s) {
        Rng rng = Rng::chain(opts.rng_seed, s);
        cplx z = seeds[s];
        bool escaped = false;
        for (int k = 0; k < opts.burn_in && !escaped; ++k) {
            if (std::abs(z) > params.radius) escaped = true;
            z = model.system().generator(rng.next_weighted(weights))(z);
        }
        for (int k = 0; k < opts.samples && !escaped; ++k) {
            if (std::abs(z) > params.radius) {
                escaped = true;
                break;
            }
            samples.push_back(z);
            z = model.system().generator(rng.next_weighted(weights))(z);
        }
        any_escaped = any_escaped || escaped;
    }

    // Gap threshold from raw nearest-neighbor distances: exact duplicates
    // (orbits settled on atoms) drive the median to zero, in which case
    // clustering degenerates to exact matching up to a tiny absolute floor
    // absorbing last-ulp wobble around attracting points.
    double scale = 1.0;
    for (const auto& z : samples) scale = std::max(scale, std::abs(z));
    double med = samples.size() >= 2 ? median_nn_distance(samples) : 0.0;
    double threshold = std::max(opts.gap_factor * med, 1e-9 * scale);

    std::vector<cplx> unique;
    {
        std::map<std::pair<double, double>, int> seen;
        for (const auto& z : samples)
            if (seen.emplace(std::make_pair(z.real(), z.imag()), 1).second) unique.push_back(z);
    }

    // Single-linkage union-find at the gap threshold.
    std::vector<int> parent(unique.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < unique.size(); ++i)
        for (size_t j = i + 1; j < unique.size(); ++j)
            if (std::abs(unique[i] - unique[j]) <= threshold) parent[find(int(i))] = find(int(j));

    std::map<int, int> root_to_cluster;
    for (size_t i = 0; i < unique.size(); ++i) {
        int r = find(int(i));
        if (!root_to_cluster.count(r)) {
            root_to_cluster[r] = int(report.clusters.size());
            report.clusters.push_back({});
        }
        report.clusters[root_to_cluster[r]].points.push_back(unique[i]);
    }

    int infinity_cluster = -1;
    if (any_escaped) {
        infinity_cluster = int(report.clusters.size());
        MinimalSetReport::Cluster inf_cluster;
        inf_cluster.is_infinity = true;
        report.clusters.push_back(std::move(inf_cluster));
    }

    for (auto& c : report.clusters) {
        if (c.is_infinity || c.points.empty()) continue;
        cplx sum(0, 0);
        for (const auto& p : c.points) sum += p;
        c.centroid = sum / double(c.points.size());
        for (size_t i = 0; i < c.points.size(); ++i)
            for (size_t j = i + 1; j < c.points.size(); ++j)
                c.diameter = std::max(c.diameter, std::abs(c.points[i] - c.points[j]));
    }

    // The gap threshold must separate clusters comfortably.
    for (size_t a = 0; a + 1 < report.clusters.size(); ++a) {
        for (size_t b = a + 1; b < report.clusters.size(); ++b) {
            if (report.clusters[a].is_infinity || report.clusters[b].is_infinity) continue;
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& p : report.clusters[a].points)
                for (const auto& q : report.clusters[b].points)
                    dmin = std::min(dmin, std::abs(p - q));
            if (dmin < 2.0 * threshold) report.ambiguous_clustering = true;
        }
    }

    const int n_clusters = int(report.clusters.size());
    report.transition.assign(n_clusters, std::vector<int>(model.size(), -1));
    double capture = std::max(3.0 * threshold, 1e-6 * scale);
    auto locate = [&](cplx w) {
        if (std::abs(w) > params.radius) return infinity_cluster;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n_clusters; ++k) {
            if (report.clusters[k].is_infinity) continue;
            for (const auto& p : report.clusters[k].points) {
                double d = std::abs(p - w);
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
        }
        if (best_d > capture) report.slow_convergence = true;
        return best;
    };
    for (int k = 0; k < n_clusters; ++k) {
        auto& cluster = report.clusters[k];
        for (size_t j = 0; j < model.size(); ++j) {
            if (cluster.is_infinity) {
                report.transition[k][j] = k; // infinity is fixed by every generator
                continue;
            }
            int target = -1;
            size_t step = std::max<size_t>(1, cluster.points.size() / 8);
            for (size_t i = 0; i < cluster.points.size(); i += step) {
                int t = locate(model.system().generator(j)(cluster.points[i]));
                if (target == -1) target = t;
                if (t != target) report.ambiguous_clustering = true;
            }
            report.transition[k][j] = target;
        }
    }

    std::vector<std::vector<int>> adj(n_clusters);
    for (int k = 0; k < n_clusters; ++k)
        for (size_t j = 0; j < model.size(); ++j)
            if (report.transition[k][j] >= 0) adj[k].push_back(report.transition[k][j]);
    std::vector<int> label = scc_labels(adj);
    int n_comp = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    std::vector<bool> bottom(n_comp, true);
    for (int u = 0; u < n_clusters; ++u)
        for (int v : adj[u])
            if (label[v] != label[u]) bottom[label[u]] = false;
    for (int comp = 0; comp < n_comp; ++comp) {
        if (!bottom[comp]) continue;
        std::vector<int> nodes;
        for (int u = 0; u < n_clusters; ++u)
            if (label[u] == comp) nodes.push_back(u);
        int period = scc_period(nodes, adj, label);
        for (int u : nodes) {
            report.clusters[u].minimal = true;
            report.clusters[u].period = period;
        }
    }
    if (report.slow_convergence)
        report.note = "some transition images were not near any cluster; convergence may be slow";
    return report;
}

TMinimalResult t_minimal_mc(cplx z, const RandomModel& model, const MinimalSetReport& report,
                            const EscapeParams& params, uint64_t trials, uint64_t rng_seed,
                            int max_depth, double indeterminate_threshold) {
    const int n_clusters = int(report.clusters.size());
    TMinimalResult out;
    out.counts.assign(n_clusters, 0);
    out.probabilities.assign(n_clusters, 0.0);

    double scale = 1.0;
    for (const auto& c : report.clusters)
        for (const auto& p : c.points) scale = std::max(scale, std::abs(p));
    std::vector<double> capture(n_clusters, 0.0);
    for (int k = 0; k < n_clusters; ++k)
        capture[k] = report.clusters[k].diameter * 0.5 + 1e-3 * scale;

    int infinity_cluster = -1;
    for (int k = 0; k < n_clusters; ++k)
        if (report.clusters[k].is_infinity) infinity_cluster = k;

    Rng rng(rng_seed);
    const auto& weights = model.weights();
    for (uint64_t t = 0; t < trials; ++t) {
        cplx w = z;
        int resolved = -1;
        for (int step = 0; step <= max_depth; ++step) {
            if (std::abs(w) > params.radius) {
                resolved = infinity_cluster; // stays -1 when infinity was never observed
                break;
            }
            for (int k = 0; k < n_clusters && resolved < 0; ++k) {
                const auto& cluster = report.clusters[k];
                if (!cluster.minimal || cluster.is_infinity) continue;
                if (std::abs(w - cluster.centroid) <= capture[k]) resolved = k;
            }
            if (resolved >= 0 || step == max_depth) break;
            w = model.system().generator(rng.next_weighted(weights))(w);
        }
        if (resolved >= 0) ++out.counts[resolved];
    }
    double total = 0.0;
    for (int k = 0; k < n_clusters; ++k) {
        out.probabilities[k] = double(out.counts[k]) / double(trials);
        total += out.probabilities[k];
    }
    out.indeterminate = 1.0 - total;
    out.flagged = out.indeterminate > indeterminate_threshold;
    return out;
}

ContractionEstimate contraction_rate(const RandomModel& model, const std::vector<cplx>& probes,
                                     const EscapeParams& params, int word_length,
                                     int words_per_probe, uint64_t rng_seed) {
    ContractionEstimate out;
    std::vector<Polynomial> derivs;
    for (const auto& h : model.system().generators()) derivs.push_back(h.derivative());
    const auto& weights = model.weights();

    // Least squares of log ||(gamma_{n,1})'(z)||_s against n, pooled over
    // probes and words.
    double sxx = 0, sxy = 0, sx = 0, sy = 0;
    long count = 0;
    size_t stream = 0;
    for (const auto& probe : probes) {
        if (std::abs(probe) > params.radius) continue; // excluded: outside every basin
        ++out.probes_used;
        for (int w = 0; w < words_per_probe; ++w) {
            Rng rng = Rng::chain(rng_seed, stream++);
            cplx z = probe;
            double log_norm = 0.0;
            for (int n = 1; n <= word_length; ++n) {
                size_t j = rng.next_weighted(weights);
                cplx image = model.system().generator(j)(z);
                double nd =
                    std::abs(derivs[j](z)) * (1.0 + std::norm(z)) / (1.0 + std::norm(image));
                log_norm += nd > 0.0 ? std::max(std::log(nd), -50.0) : -50.0;
                z = image;
                sx += n;
                sy += log_norm;
                sxx += double(n) * n;
                sxy += double(n) * log_norm;
                ++count;
            }
        }
    }
    if (count < 2) {
        out.eta = 1.0;
        return out;
    }
    double denom = double(count) * sxx - sx * sx;
    double slope = (double(count) * sxy - sx * sy) / denom;
    out.eta = std::exp(slope);
    out.contracting = out.eta < 1.0;
    return out;
}

} // namespace coliseum
