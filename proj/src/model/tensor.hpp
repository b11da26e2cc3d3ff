#ifndef SSC_MODEL_TENSOR_HPP
#define SSC_MODEL_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace ssc {

// Dense row-major tensor of doubles. Shapes are small vectors like
// {batch, channels, time, freq}; GEMM-heavy ops map the storage into Eigen.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

    const std::vector<int>& shape() const { return shape_; }
    int dim(int i) const { return shape_[std::size_t(i)]; }
    int rank() const { return int(shape_.size()); }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    void fill(double v);
    Tensor reshaped(std::vector<int> shape) const;
    std::string shape_str() const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

// C = A(mk) * B(kn), optionally transposing either input; accumulates into C
// when beta = 1.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
          const double* a, const double* b, double beta, double* c);

} // namespace ssc

#endif
