use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{Field, Poly, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn scalar(c: &Scalar, n: usize) -> Mat {
        Mat::identity(c.field(), n).scale(c)
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for x in row {
                field.check(x.field())?;
                data.push(x);
            }
        }
        Ok(Mat { field, rows: r, cols: c, data })
    }

    /// Small-integer constructor, mostly for tests.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| field.int(x)));
        }
        Mat { field, rows: r, cols: c, data }
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn diag(field: Field, entries: &[Scalar]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Companion matrix of a monic polynomial: ones on the subdiagonal, last column `-c`.
    pub fn companion(p: &Poly) -> Result<Mat> {
        if !p.is_monic() {
            return Err(Error::Precondition(format!("companion: {p} is not monic")));
        }
        let f = p.field();
        let n = p.deg();
        let mut m = Mat::zeros(f, n, n);
        for i in 1..n {
            m.set(i, i - 1, f.one());
        }
        for i in 0..n {
            m.set(i, n - 1, -&p.coeff(i));
        }
        Ok(m)
    }

    /// Jordan block `J_n(lambda)` with ones on the superdiagonal.
    pub fn jordan(lambda: &Scalar, n: usize) -> Mat {
        let f = lambda.field();
        let mut m = Mat::scalar(lambda, n);
        for i in 1..n {
            m.set(i - 1, i, f.one());
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape(format!("{what}: {}x{} is not square", self.rows, self.cols)))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.field, self.rows)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat { data: self.data.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn try_add(&self, o: &Mat) -> Result<Mat> {
        self.field.check(o.field)?;
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn try_sub(&self, o: &Mat) -> Result<Mat> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Mat) -> Result<Mat> {
        self.field.check(o.field)?;
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let f = self.field;
        let mut m = Mat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = &m.data[i * o.cols + j] + &(a * b);
                        m.data[i * o.cols + j] = cur;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn pow(&self, mut e: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Result<Mat> {
        self.require_square("eval_poly")?;
        self.field.check(p.field())?;
        let n = self.rows;
        let mut acc = Mat::zeros(self.field, n, n);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &Mat::scalar(c, n);
        }
        Ok(acc)
    }

    pub fn block_diag(field: Field, blocks: &[Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(field, r, c);
        let (mut i0, mut j0) = (0, 0);
        for b in blocks {
            m.paste(i0, j0, b);
            i0 += b.rows;
            j0 += b.cols;
        }
        m
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn blocks2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Mat::zeros(a.field, a.rows + c.rows, a.cols + b.cols);
        m.paste(0, 0, a);
        m.paste(0, a.cols, b);
        m.paste(a.rows, 0, c);
        m.paste(a.rows, a.cols, d);
        m
    }

    pub fn paste(&mut self, i0: usize, j0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(i0 + i, j0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(i0 + i, j0 + j).clone());
            }
        }
        m
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut m = Mat::zeros(self.field, self.rows, self.cols + o.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, o);
        m
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut m = Mat::zeros(self.field, self.rows + o.rows, self.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, 0, o);
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat {
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&j| self.column(j)).collect();
        Mat::from_columns(self.field, self.rows, &cols)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv().unwrap();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = m.get(r, j);
                    if !x.is_zero() {
                        let y = m.get(i, j) - &(&f * x);
                        m.set(i, j, y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis as the columns of the returned matrix, one per free column of the rref.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(f, self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, f.one());
            for (row, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, -r.get(row, fc));
            }
        }
        k
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.require_square("inverse")?;
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A particular solution of `self * X = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        self.field.check(b.field)?;
        if b.rows != self.rows {
            return Err(Error::Shape("solve: row counts differ".into()));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.field, self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn det(&self) -> Result<Scalar> {
        self.require_square("det")?;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let y = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, y);
                }
            }
        }
        Ok(det)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    /// Characteristic polynomial `det(tI - A)` through a Hessenberg reduction.
    pub fn charpoly(&self) -> Result<Poly> {
        self.require_square("charpoly")?;
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
                continue;
            };
            h.swap_rows(pr, c + 1);
            h.swap_cols(pr, c + 1);
            let inv = h.get(c + 1, c).inv().unwrap();
            for r in c + 2..n {
                let m = h.get(r, c) * &inv;
                if m.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = h.get(r, j) - &(&m * h.get(c + 1, j));
                    h.set(r, j, y);
                }
                for i in 0..n {
                    let y = h.get(i, c + 1) + &(&m * h.get(i, r));
                    h.set(i, c + 1, y);
                }
            }
        }
        // p[m] = charpoly of the leading m x m block
        let mut p = vec![Poly::one(f)];
        for m in 0..n {
            let mut next = &Poly::linear(-h.get(m, m)) * &p[m];
            let mut prod = f.one();
            for i in (0..m).rev() {
                prod = &prod * h.get(i + 1, i);
                if prod.is_zero() {
                    break;
                }
                let c = &prod * h.get(i, m);
                next = &next - &p[i].scale(&c);
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.try_add(rhs).expect("matrix add")
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.try_sub(rhs).expect("matrix sub")
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.try_mul(rhs).expect("matrix mul")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { data: self.data.iter().map(|x| -x).collect(), ..self.clone() }
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(self, rhs: Mat) -> Mat {
        &self + &rhs
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(self, rhs: Mat) -> Mat {
        &self - &rhs
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        &self * &rhs
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        -&self
    }
}
