#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcurve {

// Dense square-or-rectangular matrix over a commutative ring T.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            out(i, i) = T(1);
        }
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend Matrix operator+(const Matrix &a, const Matrix &b)
    {
        check_same(a, b);
        Matrix out = a;
        for (std::size_t k = 0; k < out.data_.size(); ++k) {
            out.data_[k] = out.data_[k] + b.data_[k];
        }
        return out;
    }

    friend Matrix operator-(const Matrix &a, const Matrix &b)
    {
        check_same(a, b);
        Matrix out = a;
        for (std::size_t k = 0; k < out.data_.size(); ++k) {
            out.data_[k] = out.data_[k] - b.data_[k];
        }
        return out;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("matrix shapes do not compose");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T &aik = a(i, k);
                if (aik == T(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) = out(i, j) + aik * b(k, j);
                }
            }
        }
        return out;
    }

    Matrix scaled(const T &c) const
    {
        Matrix out = *this;
        for (auto &v : out.data_) {
            v = c * v;
        }
        return out;
    }

    template <typename Fn>
    auto map(Fn &&f) const -> Matrix<decltype(f(std::declval<const T &>()))>
    {
        using S = decltype(f(std::declval<const T &>()));
        Matrix<S> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(i, j) = f((*this)(i, j));
            }
        }
        return out;
    }

    friend bool operator==(const Matrix &a, const Matrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    static void check_same(const Matrix &a, const Matrix &b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw std::invalid_argument("matrix shapes differ");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> commutator(const Matrix<T> &a, const Matrix<T> &b)
{
    return a * b - b * a;
}

template <typename T>
Matrix<T> matrix_power(const Matrix<T> &a, int n)
{
    Matrix<T> out = Matrix<T>::identity(a.rows());
    for (int i = 0; i < n; ++i) {
        out = out * a;
    }
    return out;
}

} // namespace qcurve
