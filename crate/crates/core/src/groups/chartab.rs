//! Dixon's method: simultaneous eigenvectors of the class matrices over a
//! prime field F_p with p ≡ 1 (mod exponent), lifted to exact values in
//! Q(ζ_e) through eigenvalue multiplicities.

use num_integer::Integer;
use num_rational::BigRational;

use super::{is_prime, Cyclo, CycloField, FiniteMatrixGroup, GroupError};

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group_order: usize,
    pub exponent: usize,
    pub field: CycloField,
    /// classes as sorted element index lists; class 0 is the identity
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `power_map[c][k]` = class of `rep(c)^k`, k in 0..exponent
    pub power_map: Vec<Vec<usize>>,
    /// class of the inverse of each class
    pub inverse_class: Vec<usize>,
    /// rows are characters, columns classes; row 0 is the trivial character
    pub values: Vec<Vec<Cyclo>>,
    pub degrees: Vec<usize>,
    pub indicators: Vec<i32>,
    pub galois_orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    /// Class-weighted inner product `(1/|G|) Σ |C| f(C) conj(g(C))`.
    pub fn inner_product(&self, f: &[Cyclo], g: &[Cyclo]) -> Cyclo {
        let mut acc = self.field.zero();
        for (c, class) in self.classes.iter().enumerate() {
            let term = f[c].mul(&g[c].conj()).scale(&BigRational::from_integer(class.len().into()));
            acc = acc.add(&term);
        }
        acc.scale(&BigRational::new(1.into(), self.group_order.into()))
    }

    /// Character values of a class function given per element.
    pub fn class_function(&self, per_element: &[Cyclo]) -> Vec<Cyclo> {
        self.classes.iter().map(|c| per_element[c[0]].clone()).collect()
    }

    pub fn is_real_valued(&self, chi: usize) -> bool {
        self.values[chi].iter().all(Cyclo::is_real)
    }

    /// Index of the complex-conjugate character.
    pub fn conjugate_of(&self, chi: usize) -> usize {
        let conj: Vec<Cyclo> = self.values[chi].iter().map(Cyclo::conj).collect();
        self.values.iter().position(|row| *row == conj).expect("table closed under conjugation")
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Column basis of the kernel of an r×c matrix over F_p.
fn kernel_mod(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let iv = inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial over F_p (low to high) via Hessenberg reduction.
fn charpoly_mod(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h = m.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(pr) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if pr != c + 1 {
            h.swap(pr, c + 1);
            for row in h.iter_mut() {
                row.swap(pr, c + 1);
            }
        }
        let iv = inv(h[c + 1][c], p);
        for i in c + 2..n {
            if h[i][c] == 0 {
                continue;
            }
            let f = h[i][c] * iv % p;
            // row_i -= f row_{c+1}; col_{c+1} += f col_i
            for j in 0..n {
                h[i][j] = (h[i][j] + p - f * h[c + 1][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[c + 1] = (row[c + 1] + f * row[i]) % p;
            }
        }
    }
    // recurrence on leading principal submatrices
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // x * P_k - h[k][k] * P_k
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - h[k][k] * c % p) % p;
        }
        let mut t = 1u64;
        for i in (0..k).rev() {
            t = t * h[i + 1][i] % p;
            let coef = t * h[i][k] % p;
            for (j, &c) in polys[i].iter().enumerate() {
                next[j] = (next[j] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn roots_mod(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0).collect()
}

/// Matrix of `a` restricted to the invariant column space `basis` (d columns
/// of length r): returns B with a·V = V·B.
fn restrict(a: &[Vec<u64>], basis: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let r = a.len();
    let d = basis.len();
    let av: Vec<Vec<u64>> = basis
        .iter()
        .map(|v| (0..r).map(|i| (0..r).fold(0, |acc, k| (acc + a[i][k] * v[k]) % p)).collect())
        .collect();
    // solve V·B = AV column by column via elimination on [V | AV]
    let mut aug: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut row: Vec<u64> = basis.iter().map(|v| v[i]).collect();
            row.extend(av.iter().map(|v| v[i]));
            row
        })
        .collect();
    let mut row = 0;
    for c in 0..d {
        let pr = (row..r).find(|&i| aug[i][c] != 0).expect("basis has full column rank");
        aug.swap(row, pr);
        let iv = inv(aug[row][c], p);
        for x in aug[row].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..r {
            if i != row && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..2 * d {
                    aug[i][j] = (aug[i][j] + p - f * aug[row][j] % p) % p;
                }
            }
        }
        row += 1;
    }
    (0..d).map(|i| (0..d).map(|j| aug[i][d + j]).collect()).collect()
}

fn pick_prime(exponent: usize, order: usize) -> u64 {
    let e = exponent as u64;
    let lower = (2 * order as u64).max(64);
    let mut p = e + 1;
    while p <= lower || !is_prime(p as usize) {
        p += e;
    }
    p
}

fn primitive_root_of_unity(e: u64, p: u64) -> u64 {
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let g = (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1)).unwrap();
    pow_mod(g, n / e, p)
}

pub fn character_table(g: &FiniteMatrixGroup, cap: usize) -> Result<CharacterTable, GroupError> {
    let order = g.order();
    if order > cap {
        return Err(GroupError::CapExceeded { cap });
    }
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let mut class_of = vec![0; order];
    for (c, members) in classes.iter().enumerate() {
        for &x in members {
            class_of[x] = c;
        }
    }
    let exponent = g.exponent();
    let power_map: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            let mut x = 0;
            (0..exponent)
                .map(|_| {
                    let cl = class_of[x];
                    x = g.mul(x, c[0]);
                    cl
                })
                .collect()
        })
        .collect();
    let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[g.inverse(c[0])]).collect();

    let p = pick_prime(exponent, order);
    // structure constants: a[i][j][k] = #{x in C_i : x^-1 g_k in C_j}
    let mut consts = vec![vec![vec![0u64; r]; r]; r];
    for (k, ck) in classes.iter().enumerate() {
        let gk = ck[0];
        for x in 0..order {
            let y = g.mul(g.inverse(x), gk);
            consts[class_of[x]][class_of[y]][k] += 1;
        }
    }
    let class_mats: Vec<Vec<Vec<u64>>> = consts
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|&v| v % p).collect()).collect())
        .collect();

    // split F_p^r into joint eigenlines
    let mut pending: Vec<Vec<Vec<u64>>> =
        vec![(0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()];
    let mut lines: Vec<Vec<u64>> = Vec::new();
    while let Some(space) = pending.pop() {
        if space.len() == 1 {
            lines.push(space[0].clone());
            continue;
        }
        let mut split = false;
        for a in &class_mats {
            let b = restrict(a, &space, p);
            let d = b.len();
            let eig = roots_mod(&charpoly_mod(&b, p), p);
            if eig.len() < 2 {
                continue;
            }
            for l in eig {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { (b[i][j] + p - l) % p } else { b[i][j] }).collect())
                    .collect();
                let ker = kernel_mod(&shifted, d, p);
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| {
                        (0..r)
                            .map(|i| space.iter().zip(c).fold(0, |acc, (v, &ci)| (acc + v[i] * ci) % p))
                            .collect()
                    })
                    .collect();
                pending.push(sub);
            }
            split = true;
            break;
        }
        assert!(split, "class algebra failed to split over F_{p}");
    }

    let field = CycloField::new(exponent);
    let z = primitive_root_of_unity(exponent as u64, p);
    let zinv = inv(z, p);
    let e_inv = inv(exponent as u64 % p, p);
    let gorder = order as u64 % p;
    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();

    let mut rows: Vec<(usize, Vec<Cyclo>)> = Vec::new();
    for w in lines {
        let w0 = inv(w[0], p);
        let omega: Vec<u64> = w.iter().map(|&x| x * w0 % p).collect();
        let s = (0..r).fold(0, |acc, i| {
            (acc + omega[i] * omega[inverse_class[i]] % p * inv(sizes[i] % p, p)) % p
        });
        let deg_sq = gorder * inv(s, p) % p;
        let degree = (1..=order)
            .take_while(|d| d * d <= order)
            .find(|&d| (d * d) as u64 % p == deg_sq)
            .expect("character degree recovered modulo p");
        let chi_mod: Vec<u64> =
            (0..r).map(|i| omega[i] * degree as u64 % p * inv(sizes[i] % p, p) % p).collect();
        let vals: Vec<Cyclo> = (0..r)
            .map(|i| {
                let mult: Vec<i64> = (0..exponent)
                    .map(|l| {
                        let s = (0..exponent).fold(0u64, |acc, k| {
                            let zk = pow_mod(zinv, (k * l) as u64, p);
                            (acc + chi_mod[power_map[i][k]] * zk) % p
                        });
                        let m = s * e_inv % p;
                        assert!(m as usize <= degree, "eigenvalue multiplicity out of range");
                        m as i64
                    })
                    .collect();
                field.from_eigen_multiplicities(&mult)
            })
            .collect();
        rows.push((degree, vals));
    }

    let one = field.int(1);
    rows.sort_by(|(da, va), (db, vb)| {
        let ta = va.iter().all(|v| *v == one);
        let tb = vb.iter().all(|v| *v == one);
        tb.cmp(&ta).then(da.cmp(db)).then_with(|| row_key(va).cmp(&row_key(vb)))
    });
    let degrees: Vec<usize> = rows.iter().map(|(d, _)| *d).collect();
    let values: Vec<Vec<Cyclo>> = rows.into_iter().map(|(_, v)| v).collect();

    let indicators = values
        .iter()
        .map(|row| {
            let mut acc = field.zero();
            for (c, class) in classes.iter().enumerate() {
                let sq = power_map[c][2 % exponent];
                acc = acc.add(&row[sq].scale(&BigRational::from_integer(class.len().into())));
            }
            let nu = acc.scale(&BigRational::new(1.into(), order.into()));
            let nu = nu.as_rational().expect("indicator is rational");
            assert!(nu.is_integer(), "indicator must be an integer");
            i32::try_from(nu.to_integer()).expect("indicator in {-1,0,1}")
        })
        .collect();

    let units: Vec<i64> = (1..=exponent as i64).filter(|k| k.gcd(&(exponent as i64)) == 1).collect();
    let mut orbit_of = vec![usize::MAX; values.len()];
    let mut galois_orbits = Vec::new();
    for chi in 0..values.len() {
        if orbit_of[chi] != usize::MAX {
            continue;
        }
        let mut orbit = Vec::new();
        for &k in &units {
            let img: Vec<Cyclo> = values[chi].iter().map(|v| v.galois(k)).collect();
            let psi = values.iter().position(|row| *row == img).expect("table closed under Galois action");
            if !orbit.contains(&psi) {
                orbit.push(psi);
            }
        }
        orbit.sort_unstable();
        for &psi in &orbit {
            orbit_of[psi] = galois_orbits.len();
        }
        galois_orbits.push(orbit);
    }

    Ok(CharacterTable {
        group_order: order,
        exponent,
        field,
        classes,
        class_of,
        power_map,
        inverse_class,
        values,
        degrees,
        indicators,
        galois_orbits,
        orbit_of,
    })
}

fn row_key(v: &[Cyclo]) -> Vec<(num_bigint::BigInt, num_bigint::BigInt)> {
    v.iter()
        .flat_map(|c| c.coeffs().iter().map(|q| (q.numer().clone(), q.denom().clone())))
        .collect()
}
