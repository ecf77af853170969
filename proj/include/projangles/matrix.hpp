#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "projangles/error.hpp"

namespace pa {

// Dense real matrix, row-major. Column count zero is allowed so that the
// subspace utilities can represent an empty basis; parsed matrices and all
// public operations require at least one row and one column.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    bool square() const noexcept { return rows_ == cols_ && rows_ > 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Matrix transposed() const;
    Matrix column(std::size_t j) const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    double frobenius() const;
    double max_abs() const;
    bool all_finite() const;

    // Throws a domain error unless every entry is finite and rows, cols >= 1.
    void validate(const std::string& what) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Matrix-vector products used by the norm estimators.
std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);
std::vector<double> mat_tvec(const Matrix& a, std::span<const double> x);

// Glue for assembling block matrices and bases.
Matrix concat_columns(const Matrix& a, const Matrix& b);
Matrix stack_rows(const Matrix& a, const Matrix& b);

double sym_check_residual(const Matrix& a);  // ||A - A^T||_max
bool nearly_symmetric(const Matrix& a);      // within 1e-10 * (1 + ||A||_max)

}  // namespace pa
