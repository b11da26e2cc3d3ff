#include "model/tensor.hpp"

#include <Eigen/Dense>
#include <sstream>

#include "common/errors.hpp"

namespace ssc {

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int d : shape_) {
        if (d < 0) throw ShapeError("negative tensor dimension");
        n *= std::size_t(d);
    }
    data_.assign(n, 0.0);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor Tensor::reshaped(std::vector<int> shape) const {
    Tensor out;
    out.shape_ = std::move(shape);
    std::size_t n = 1;
    for (int d : out.shape_) n *= std::size_t(d);
    if (n != data_.size())
        throw ShapeError("reshape from " + shape_str() + " changes element count");
    out.data_ = data_;
    return out;
}

std::string Tensor::shape_str() const {
    std::ostringstream ss;
    ss << '(';
    for (std::size_t i = 0; i < shape_.size(); ++i)
        ss << (i ? "," : "") << shape_[i];
    ss << ')';
    return ss.str();
}

void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
          const double* a, const double* b, double beta, double* c) {
    using MatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                  Eigen::Dynamic, Eigen::RowMajor>>;
    using OutMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic,
                                            Eigen::Dynamic, Eigen::RowMajor>>;
    OutMap C(c, m, n);
    if (beta == 0.0)
        C.setZero();
    else if (beta != 1.0)
        C *= beta;
    MatMap A(a, trans_a ? k : m, trans_a ? m : k);
    MatMap B(b, trans_b ? n : k, trans_b ? k : n);
    if (!trans_a && !trans_b)
        C.noalias() += alpha * A * B;
    else if (trans_a && !trans_b)
        C.noalias() += alpha * A.transpose() * B;
    else if (!trans_a && trans_b)
        C.noalias() += alpha * A * B.transpose();
    else
        C.noalias() += alpha * A.transpose() * B.transpose();
}

} // namespace ssc
