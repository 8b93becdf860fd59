//! Generalized Verma module over affine `sl_2` induced from `V_m` at level `l`.
//!
//! A PBW monomial is a word of negative modes `y_1(-n_1) y_2(-n_2) ...` applied
//! to a top basis vector. Letters are `(n, g)` with `g` the generator rank
//! (`f < h < e`), and words are kept sorted so the leftmost letter is smallest.

use std::collections::{BTreeMap, HashMap};

use crate::lie::LieAlgebraData;
use crate::numerics::{Rational, RationalMatrix, Scalar};
use crate::rep::Irrep;

/// Generator rank: 0 = f, 1 = h, 2 = e.
pub type Gen = u8;
pub type Letter = (u32, Gen);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub word: Vec<Letter>,
    pub top: u32,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.word.iter().map(|l| l.0 as usize).sum()
    }
}

pub type Vector = BTreeMap<Monomial, Rational>;

pub fn add_scaled(acc: &mut Vector, v: &Vector, c: &Rational) {
    for (m, x) in v {
        let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

/// Transpose anti-involution on generators (`e <-> f`, `h` fixed).
pub fn transpose_gen(g: Gen) -> Gen {
    2 - g
}

/// Straightening engine with memoized mode actions.
pub struct Straightener<'a> {
    level: Rational,
    algebra: &'a LieAlgebraData,
    top: &'a Irrep,
    /// Algebra basis index of each generator rank.
    index_of: [usize; 3],
    /// Generator rank of each algebra basis index.
    rank_of: Vec<Gen>,
    memo: HashMap<(Gen, i64, Monomial), Vector>,
}

impl<'a> Straightener<'a> {
    pub fn new(algebra: &'a LieAlgebraData, top: &'a Irrep, level: i64) -> Self {
        let index_of = [algebra.f(0), algebra.h(0), algebra.e(0)];
        let mut rank_of = vec![0; algebra.dim];
        for (r, &a) in index_of.iter().enumerate() {
            rank_of[a] = r as Gen;
        }
        Self {
            level: Rational::from_i64(level),
            algebra,
            top,
            index_of,
            rank_of,
            memo: HashMap::new(),
        }
    }

    pub fn basis_index(&self, g: Gen) -> usize {
        self.index_of[g as usize]
    }

    fn bracket(&self, x: Gen, y: Gen) -> Vec<(Gen, Rational)> {
        self.algebra
            .basis_bracket(self.index_of[x as usize], self.index_of[y as usize])
            .iter()
            .map(|(c, v)| (self.rank_of[*c], v.clone()))
            .collect()
    }

    fn form(&self, x: Gen, y: Gen) -> Rational {
        self.algebra.gram_matrix[(self.index_of[x as usize], self.index_of[y as usize])].clone()
    }

    /// `x(p) . mono`, expressed in PBW monomials.
    pub fn apply(&mut self, x: Gen, p: i64, mono: &Monomial) -> Vector {
        let key = (x, p, mono.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let out = self.apply_uncached(x, p, mono);
        self.memo.insert(key, out.clone());
        out
    }

    fn apply_uncached(&mut self, x: Gen, p: i64, mono: &Monomial) -> Vector {
        let mut out = Vector::new();
        let Some(&first) = mono.word.first() else {
            if p < 0 {
                out.insert(
                    Monomial {
                        word: vec![((-p) as u32, x)],
                        top: mono.top,
                    },
                    Rational::one(),
                );
            } else if p == 0 {
                let m = &self.top.matrices[self.index_of[x as usize]];
                let t = mono.top as usize;
                for s in 0..self.top.dim {
                    if !m[(s, t)].is_zero() {
                        out.insert(
                            Monomial {
                                word: vec![],
                                top: s as u32,
                            },
                            m[(s, t)].clone(),
                        );
                    }
                }
            }
            return out;
        };
        if p < 0 && ((-p) as u32, x) <= first {
            let mut word = Vec::with_capacity(mono.word.len() + 1);
            word.push(((-p) as u32, x));
            word.extend_from_slice(&mono.word);
            out.insert(Monomial { word, top: mono.top }, Rational::one());
            return out;
        }
        let rest = Monomial {
            word: mono.word[1..].to_vec(),
            top: mono.top,
        };
        let (n, y) = first;
        let n = n as i64;
        // y(-n) (x(p) rest)
        let inner = self.apply(x, p, &rest);
        for (m, c) in &inner {
            let v = self.apply(y, -n, m);
            add_scaled(&mut out, &v, c);
        }
        // [x, y](p - n) rest
        for (z, c) in self.bracket(x, y) {
            let v = self.apply(z, p - n, &rest);
            add_scaled(&mut out, &v, &c);
        }
        // central term
        if p == n {
            let k = self.form(x, y) * &self.level * Rational::from_i64(p);
            if !k.is_zero() {
                let mut single = Vector::new();
                single.insert(rest, Rational::one());
                add_scaled(&mut out, &single, &k);
            }
        }
        out
    }
}

/// All PBW monomials of a given degree, in sorted order.
pub fn monomials_of_degree(degree: usize, top_dim: usize) -> Vec<Monomial> {
    fn rec(remaining: u32, min: Letter, word: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if remaining == 0 {
            out.push(word.clone());
            return;
        }
        for n in min.0..=remaining {
            let g0 = if n == min.0 { min.1 } else { 0 };
            for g in g0..3 {
                word.push((n, g));
                rec(remaining - n, (n, g), word, out);
                word.pop();
            }
        }
    }
    let mut words = Vec::new();
    rec(degree as u32, (1, 0), &mut Vec::new(), &mut words);
    let mut out: Vec<Monomial> = words
        .into_iter()
        .flat_map(|w| {
            (0..top_dim as u32).map(move |t| Monomial {
                word: w.clone(),
                top: t,
            })
        })
        .collect();
    out.sort();
    out
}

/// Graded pieces of the Verma module with their Shapovalov Gram matrices.
pub struct VermaGrading {
    pub bases: Vec<Vec<Monomial>>,
    pub index: Vec<HashMap<Monomial, usize>>,
    pub gram: Vec<RationalMatrix>,
}

/// Coordinates of a degree-`k` vector in the monomial basis of that degree.
pub fn coordinates(v: &Vector, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (m, c) in v {
        out[index[m]] = c.clone();
    }
    out
}

/// Build Gram matrices degree by degree:
/// `<y(-n) r, b> = <r, y^T(n) b>` with the top form as the base case.
pub fn verma_grading(st: &mut Straightener<'_>, top_form: &RationalMatrix, depth: usize) -> VermaGrading {
    let top_dim = top_form.rows();
    let mut bases = Vec::with_capacity(depth + 1);
    let mut index: Vec<HashMap<Monomial, usize>> = Vec::with_capacity(depth + 1);
    let mut gram: Vec<RationalMatrix> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let basis = monomials_of_degree(k, top_dim);
        let idx: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let d = basis.len();
        let g = if k == 0 {
            top_form.clone()
        } else {
            let mut g = RationalMatrix::zeros(d, d);
            for (i, mi) in basis.iter().enumerate() {
                let (n, y) = mi.word[0];
                let rest = Monomial {
                    word: mi.word[1..].to_vec(),
                    top: mi.top,
                };
                let lower = k - n as usize;
                let r_idx = index[lower][&rest];
                let glow: &RationalMatrix = &gram[lower];
                for (j, mj) in basis.iter().enumerate() {
                    let v = st.apply(transpose_gen(y), n as i64, mj);
                    let mut acc = Rational::zero();
                    for (m, c) in &v {
                        let t = index[lower][m];
                        let gv = &glow[(r_idx, t)];
                        if !gv.is_zero() {
                            acc += c * gv;
                        }
                    }
                    g[(i, j)] = acc;
                }
            }
            g
        };
        bases.push(basis);
        index.push(idx);
        gram.push(g);
    }
    VermaGrading { bases, index, gram }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_colored_partition_counts() {
        let counts: Vec<usize> = (0..6).map(|k| monomials_of_degree(k, 1).len()).collect();
        assert_eq!(counts, vec![1, 3, 9, 22, 51, 108]);
    }

    #[test]
    fn monomials_are_sorted_words() {
        for m in monomials_of_degree(4, 2) {
            assert!(m.word.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(m.degree(), 4);
        }
    }
}
