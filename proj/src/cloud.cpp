#include "coliseum/cloud.hpp"

#include "coliseum/nn.hpp"
#include "coliseum/par.hpp"
#include "coliseum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coliseum {

void PointCloud::validate() const {
    if (points.size() != weights.size() || points.size() != provenance.size())
        throw std::invalid_argument("point cloud arrays must have equal length");
    // Kahan summation keeps the normalization check meaningful for large clouds.
    double sum = 0.0, comp = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].real()) || !std::isfinite(points[i].imag()))
            throw std::invalid_argument("point cloud has non-finite coordinates");
        if (weights[i] < 0.0) throw std::invalid_argument("point cloud weights must be >= 0");
        double y = weights[i] - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("point cloud weights must sum to 1");
}

cplx repelling_seed(const GeneratorSystem& system) {
    const Polynomial& h = system.generator(0);
    auto c = h.coeffs();
    c[1] -= 1.0; // h(z) - z
    Polynomial hd = h.derivative();
    for (const auto& fp : roots(Polynomial(c)))
        if (std::abs(hd(fp)) > 1.0 + 1e-9) return fp;
    throw std::runtime_error("seed-point search failed: no repelling fixed point of h_0");
}

PointCloud julia_backward_cloud(const GeneratorSystem& system, const CloudOptions& opts,
                                int threads) {
    if (opts.n_points <= 0) throw std::invalid_argument("n_points must be positive");
    const cplx seed_point = repelling_seed(system);
    const int chains = std::max(1, opts.chains);
    const size_t m = system.size();

    struct ChainOut {
        std::vector<cplx> pts;
        std::vector<int> prov;
    };
    std::vector<ChainOut> outs(chains);

    std::vector<Polynomial> derivs;
    derivs.reserve(m);
    for (const auto& h : system.generators()) derivs.push_back(h.derivative());
    auto spherical_norm = [](cplx dval, cplx at, cplx image) {
        return std::abs(dval) * (1.0 + std::norm(at)) / (1.0 + std::norm(image));
    };

    parallel_for(size_t(chains), threads, [&](size_t c) {
        Rng rng = Rng::chain(opts.rng_seed, c);
        size_t begin = size_t(opts.n_points) * c / chains;
        size_t end = size_t(opts.n_points) * (c + 1) / chains;
        size_t count = end - begin;
        auto& out = outs[c];
        out.pts.reserve(count);
        out.prov.reserve(count);
        cplx z = seed_point;
        std::vector<cplx> cand;
        std::vector<int> cand_gen;
        std::vector<double> cand_w;
        for (long i = -long(opts.burn_in); i < long(count); ++i) {
            int gen;
            cplx next;
            if (opts.branches == CloudOptions::Branches::Uniform) {
                gen = int(rng.next_index(m));
                auto pre = preimages(system.generator(gen), z);
                next = pre[rng.next_index(pre.size())];
            } else {
                cand.clear();
                cand_gen.clear();
                cand_w.clear();
                double total = 0.0;
                for (size_t j = 0; j < m; ++j) {
                    for (const auto& w : preimages(system.generator(j), z)) {
                        double nd = spherical_norm(derivs[j](w), w, z);
                        double wt = std::pow(std::max(nd, 1e-12), -opts.conformal_exponent);
                        cand.push_back(w);
                        cand_gen.push_back(int(j));
                        cand_w.push_back(wt);
                        total += wt;
                    }
                }
                double u = rng.next_double() * total;
                size_t pick = cand.size() - 1;
                double acc = 0.0;
                for (size_t k = 0; k + 1 < cand.size(); ++k) {
                    acc += cand_w[k];
                    if (u < acc) {
                        pick = k;
                        break;
                    }
                }
                gen = cand_gen[pick];
                next = cand[pick];
            }
            z = next;
            if (i >= 0) {
                out.pts.push_back(z);
                out.prov.push_back(gen);
            }
        }
    });

    PointCloud cloud;
    cloud.points.reserve(opts.n_points);
    cloud.provenance.reserve(opts.n_points);
    for (const auto& out : outs) {
        cloud.points.insert(cloud.points.end(), out.pts.begin(), out.pts.end());
        cloud.provenance.insert(cloud.provenance.end(), out.prov.begin(), out.prov.end());
    }
    cloud.weights.assign(cloud.points.size(), 1.0 / double(cloud.points.size()));
    cloud.validate();
    return cloud;
}

double median_nn_distance(const std::vector<cplx>& points) {
    if (points.size() < 2) return 0.0;
    double lo_x = points[0].real(), hi_x = lo_x, lo_y = points[0].imag(), hi_y = lo_y;
    for (const auto& p : points) {
        lo_x = std::min(lo_x, p.real());
        hi_x = std::max(hi_x, p.real());
        lo_y = std::min(lo_y, p.imag());
        hi_y = std::max(hi_y, p.imag());
    }
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
    double cell = span / std::max(4.0, std::sqrt(double(points.size())));
    NnGrid grid(points, cell);
    std::vector<double> dists(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        dists[i] = grid.nearest(points[i], i).distance;
    size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    return dists[mid];
}

double directed_hausdorff(const std::vector<cplx>& from, const NnGrid& to) {
    double worst = 0.0;
    for (const auto& p : from) worst = std::max(worst, to.nearest(p).distance);
    return worst;
}

} // namespace coliseum
