#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkwrap/sdf/field.hpp"

namespace shrinkwrap {

/// Inference-only sinusoidal MLP mapping R^3 -> R. Hidden layers apply
/// sin(omega0 * (W x + b)); the output layer is linear. Gradients are exact
/// chain-rule Jacobians, no finite differences.
class MlpSdf final : public ScalarField3 {
public:
    struct Layer {
        std::size_t rows = 0, cols = 0;
        double omega0 = 30.0;       // ignored on the output layer
        std::vector<double> weights;  // row-major, rows x cols
        std::vector<double> bias;     // rows
    };

    explicit MlpSdf(std::vector<Layer> layers) : layers_(std::move(layers)) {
        if (layers_.empty())
            throw std::invalid_argument("MLP needs at least one layer");
        std::size_t in = 3;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const Layer& L = layers_[l];
            if (L.cols != in)
                throw std::invalid_argument("layer " + std::to_string(l) +
                                            ": expected " + std::to_string(in) +
                                            " inputs, got " + std::to_string(L.cols));
            if (L.weights.size() != L.rows * L.cols ||
                L.bias.size() != L.rows)
                throw std::invalid_argument("layer " + std::to_string(l) +
                                            ": weight/bias size mismatch");
            in = L.rows;
        }
        if (in != 1)
            throw std::invalid_argument("output layer must have 1 row");
    }

    const std::vector<Layer>& layers() const { return layers_; }

    double eval(const Vec3& p) const override {
        std::vector<double> h{p.x, p.y, p.z};
        std::vector<double> z;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            affine(layers_[l], h, z);
            if (l + 1 < layers_.size()) {
                const double w0 = layers_[l].omega0;
                for (double& v : z) v = std::sin(w0 * v);
            }
            h.swap(z);
        }
        return h[0];
    }

    Vec3 grad(const Vec3& p) const override {
        std::vector<double> h{p.x, p.y, p.z};
        // jac[i] holds d h_i / d p, flattened rows of a (n x 3) Jacobian.
        std::vector<double> jac{1, 0, 0, 0, 1, 0, 0, 0, 1};
        std::vector<double> z, jz;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const Layer& L = layers_[l];
            affine(L, h, z);
            jz.assign(L.rows * 3, 0.0);
            for (std::size_t r = 0; r < L.rows; ++r)
                for (std::size_t c = 0; c < L.cols; ++c) {
                    const double w = L.weights[r * L.cols + c];
                    jz[r * 3 + 0] += w * jac[c * 3 + 0];
                    jz[r * 3 + 1] += w * jac[c * 3 + 1];
                    jz[r * 3 + 2] += w * jac[c * 3 + 2];
                }
            if (l + 1 < layers_.size()) {
                const double w0 = L.omega0;
                for (std::size_t r = 0; r < L.rows; ++r) {
                    const double d = w0 * std::cos(w0 * z[r]);
                    jz[r * 3 + 0] *= d;
                    jz[r * 3 + 1] *= d;
                    jz[r * 3 + 2] *= d;
                    z[r] = std::sin(w0 * z[r]);
                }
            }
            h.swap(z);
            jac.swap(jz);
        }
        return {jac[0], jac[1], jac[2]};
    }

    /// Textual weight file. Grammar (whitespace separated):
    ///   MLPSDF1
    ///   layers <L>
    ///   layer <index> <rows> <cols> [omega <w0>]
    ///   weights <rows*cols floats, row-major>
    ///   bias <rows floats>
    /// repeated per layer, in order. The last layer is linear; omega on it
    /// is accepted and ignored. Missing omega defaults to 30.
    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open for writing: " + path);
        os.precision(17);
        os << "MLPSDF1\nlayers " << layers_.size() << "\n";
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const Layer& L = layers_[l];
            os << "layer " << l << " " << L.rows << " " << L.cols << " omega "
               << L.omega0 << "\n";
            os << "weights";
            for (double w : L.weights) os << " " << w;
            os << "\nbias";
            for (double b : L.bias) os << " " << b;
            os << "\n";
        }
        if (!os) throw std::runtime_error("write failed: " + path);
    }

    static MlpSdf load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot open: " + path);
        std::string tok;
        is >> tok;
        if (tok != "MLPSDF1")
            throw std::runtime_error("not an MLPSDF1 file: " + path);
        expect(is, "layers", path);
        std::size_t count = 0;
        is >> count;
        if (!is || count == 0) throw std::runtime_error("bad layer count: " + path);
        std::vector<Layer> layers;
        layers.reserve(count);
        for (std::size_t l = 0; l < count; ++l) {
            expect(is, "layer", path);
            std::size_t idx, rows, cols;
            is >> idx >> rows >> cols;
            if (!is || idx != l)
                throw std::runtime_error("layer " + std::to_string(l) +
                                         ": bad header in " + path);
            Layer L;
            L.rows = rows;
            L.cols = cols;
            is >> tok;
            if (tok == "omega") {
                is >> L.omega0;
                is >> tok;
            }
            if (tok != "weights")
                throw std::runtime_error("layer " + std::to_string(l) +
                                         ": expected 'weights' in " + path);
            L.weights.resize(rows * cols);
            for (double& w : L.weights) is >> w;
            expect(is, "bias", path);
            L.bias.resize(rows);
            for (double& b : L.bias) is >> b;
            if (!is)
                throw std::runtime_error("layer " + std::to_string(l) +
                                         ": truncated data in " + path);
            layers.push_back(std::move(L));
        }
        return MlpSdf(std::move(layers));
    }

private:
    static void affine(const Layer& L, const std::vector<double>& h,
                       std::vector<double>& out) {
        out.assign(L.rows, 0.0);
        for (std::size_t r = 0; r < L.rows; ++r) {
            double acc = L.bias[r];
            const double* w = &L.weights[r * L.cols];
            for (std::size_t c = 0; c < L.cols; ++c) acc += w[c] * h[c];
            out[r] = acc;
        }
    }

    static void expect(std::istream& is, const char* kw, const std::string& path) {
        std::string tok;
        is >> tok;
        if (tok != kw)
            throw std::runtime_error("expected '" + std::string(kw) + "' in " + path);
    }

    std::vector<Layer> layers_;
};

}  // namespace shrinkwrap
