#include "devissage/matrix.hpp"

#include <sstream>

namespace devissage {

void require_shape(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ShapeMismatch, what);
}

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), a_(rows * cols) {}

Matrix Matrix::identity(const Ring& ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
  return m;
}

Matrix Matrix::diagonal(const Ring& ring, const std::vector<Scalar>& d) {
  Matrix m(ring, d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

Matrix Matrix::from_ints(const Ring& ring, std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows.begin()->size() : 0;
  Matrix m(ring, r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    require_shape(row.size() == c, "ragged rows");
    std::size_t j = 0;
    for (long v : row) m.set(i, j++, mpq_class(v));
    ++i;
  }
  return m;
}

Matrix Matrix::from_rows(const Ring& ring, const std::vector<std::vector<Scalar>>& rows, std::size_t cols) {
  Matrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_shape(rows[i].size() == cols, "ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::column_vector(const Ring& ring, const std::vector<Scalar>& v) {
  Matrix m(ring, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) { a_[i * cols_ + j] = ring_.canonical(v); }

Matrix Matrix::operator*(const Matrix& o) const {
  require_shape(cols_ == o.rows_, "product " + std::to_string(rows_) + "x" + std::to_string(cols_) + " * " +
                                      std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
  Matrix out(ring_, rows_, o.cols_);
  const bool fp = ring_.kind() == RingKind::PrimeField;
  std::vector<mpz_class> acc_z(fp ? o.cols_ : 0);
  std::vector<mpq_class> acc(fp ? 0 : o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (auto& v : acc_z) v = 0;
    for (auto& v : acc) v = 0;
    bool any = false;
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& x = a_[i * cols_ + k];
      if (x == 0) continue;
      const Scalar* row = &o.a_[k * o.cols_];
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (row[j] == 0) continue;
        any = true;
        if (fp)
          mpz_addmul(acc_z[j].get_mpz_t(), x.get_num_mpz_t(), row[j].get_num_mpz_t());
        else
          acc[j] += x * row[j];
      }
    }
    if (!any) continue;
    for (std::size_t j = 0; j < o.cols_; ++j) {
      if (fp) {
        mpz_fdiv_r_ui(acc_z[j].get_mpz_t(), acc_z[j].get_mpz_t(), static_cast<unsigned long>(ring_.prime()));
        out.a_[i * o.cols_ + j] = mpq_class(acc_z[j]);
      } else {
        out.a_[i * o.cols_ + j] = acc[j];
      }
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_shape(rows_ == o.rows_ && cols_ == o.cols_, "sum shapes differ");
  Matrix out(ring_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.add(a_[i], o.a_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_shape(rows_ == o.rows_ && cols_ == o.cols_, "difference shapes differ");
  Matrix out(ring_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.sub(a_[i], o.a_[i]);
  return out;
}

Matrix Matrix::operator-() const {
  Matrix out(ring_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.neg(a_[i]);
  return out;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Scalar c = ring_.canonical(s);
  Matrix out(ring_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_.mul(a_[i], c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.a_[j * rows_ + i] = a_[i * cols_ + j];
  return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  require_shape(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
  Matrix out(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out.a_[i * nc + j] = a_[(r0 + i) * cols_ + c0 + j];
  return out;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix out(ring_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.a_[i * cols_ + j] = a_[idx[i] * cols_ + j];
  return out;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  Matrix out(ring_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out.a_[i * idx.size() + j] = a_[i * cols_ + idx[j]];
  return out;
}

void Matrix::paste(std::size_t r0, std::size_t c0, const Matrix& m) {
  require_shape(r0 + m.rows_ <= rows_ && c0 + m.cols_ <= cols_, "paste out of range");
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) a_[(r0 + i) * cols_ + c0 + j] = m.a_[i * m.cols_ + j];
}

std::vector<Scalar> Matrix::column(std::size_t j) const {
  std::vector<Scalar> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = a_[i * cols_ + j];
  return v;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  require_shape(a.rows_ == b.rows_, "hstack rows differ");
  Matrix out(a.ring_, a.rows_, a.cols_ + b.cols_);
  out.paste(0, 0, a);
  out.paste(0, a.cols_, b);
  return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  require_shape(a.cols_ == b.cols_, "vstack cols differ");
  Matrix out(a.ring_, a.rows_ + b.rows_, a.cols_);
  out.paste(0, 0, a);
  out.paste(a.rows_, 0, b);
  return out;
}

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
  Matrix out(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
  out.paste(0, 0, a);
  out.paste(a.rows_, a.cols_, b);
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& x : a_) n += (x != 0);
  return n;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << a_[i * cols_ + j].get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace devissage
