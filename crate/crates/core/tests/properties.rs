use num_traits::{One, Signed};
use pennerlab::algebra::roots::relative_residual;
use pennerlab::algebra::scalar::{int, ratio};
use pennerlab::algebra::{factor_over_z, is_algebraic_unit, roots_complex, ExactMatrix, ExactPoly};
use pennerlab::curves::{crg_density, cross_ratio, multitwist_product, seed_system};
use pennerlab::proj::{
    build_frame, build_graph, charpoly2, complete_path, f_gamma_charpoly, projection_matrix, s_word_matrix,
    word_determinant, word_to_path, GeneratorWord, Letter,
};
use pennerlab::twist::{stretch_for_word, twist_matrices, word_matrix, word_matrix_by_products, PennerWordSpec};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec(lo..=hi, cols), rows).prop_map(|v| ExactMatrix::from_i64(&v))
}

fn block_omega(y: &ExactMatrix) -> ExactMatrix {
    let mut omega = ExactMatrix::zeros(6, 6);
    for r in 0..3 {
        for c in 0..3 {
            omega.set(r, 3 + c, y.get(r, c).clone());
            omega.set(3 + c, r, y.get(r, c).clone());
        }
    }
    omega
}

fn word(max_len: usize) -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec(0..12usize, 1..=max_len)
        .prop_map(|ix| GeneratorWord::new(ix.into_iter().map(|i| Letter::all()[i]).collect()))
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(-9i64..=9, 2..=max_deg + 1).prop_map(|mut c| {
        if *c.last().unwrap() == 0 {
            *c.last_mut().unwrap() = 1;
        }
        ExactPoly::from_i64(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn cayley_hamilton(m in matrix(4, 4, -7, 7)) {
        let p = m.charpoly().unwrap();
        prop_assert!(p.is_monic());
        prop_assert!(m.eval_poly(&p).unwrap().is_zero());
        prop_assert_eq!(p.coeff(0), m.det().unwrap());
    }

    #[test]
    fn factorization_expands_back(a in int_poly(3), b in int_poly(3), c in int_poly(2)) {
        let p = a.mul(&b).mul(&c);
        let f = factor_over_z(&p).unwrap();
        prop_assert_eq!(f.expand(), p);
        for (g, _) in &f.factors {
            prop_assert!(g.is_integer());
        }
    }

    #[test]
    fn roots_have_small_residuals(p in int_poly(8)) {
        let rs = roots_complex(&p, 1e-10).unwrap();
        prop_assert_eq!(rs.len(), p.degree().unwrap());
        for r in &rs {
            prop_assert!(relative_residual(&p, r.x()).to_f64() < 1e-9);
        }
    }

    #[test]
    fn quadratic_units(b in -12i64..=12, c in -12i64..=12) {
        prop_assume!(c != 0);
        let p = ExactPoly::from_i64(&[c, b, 1]);
        let root = roots_complex(&p, 1e-12).unwrap()[0];
        let cert = is_algebraic_unit(&p, &root).unwrap();
        let reducible = (-12i64..=12).any(|r| r * r + b * r + c == 0);
        let expect = if reducible {
            // integer roots: a unit iff it is +-1
            (root.to_c64().re.abs() - 1.0).abs() < 1e-9
        } else {
            c.abs() == 1
        };
        prop_assert_eq!(cert.is_unit, expect);
    }

    #[test]
    fn multitwist_product_is_symmetric_psd(iab in matrix(3, 3, 0, 4), s in prop::collection::vec(1i64..=5, 3)) {
        let y = multitwist_product(&iab, &s).unwrap();
        prop_assert_eq!(y.transpose(), y.clone());
        // every principal minor is nonnegative
        for mask in 1u32..8 {
            let idx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
            let rows: Vec<Vec<_>> = idx.iter().map(|&r| idx.iter().map(|&c| y.get(r, c).clone()).collect()).collect();
            prop_assert!(!ExactMatrix::from_rows(rows).unwrap().det().unwrap().is_negative());
        }
    }

    #[test]
    fn cross_ratio_chain(m in matrix(2, 3, 1, 50)) {
        let col = |a: usize, b: usize| ExactMatrix::new(2, 2, vec![
            m.get(0, a).clone(), m.get(0, b).clone(), m.get(1, a).clone(), m.get(1, b).clone(),
        ]).unwrap();
        let lhs = cross_ratio(&col(0, 1)).unwrap() * cross_ratio(&col(1, 2)).unwrap();
        prop_assert_eq!(lhs, cross_ratio(&col(0, 2)).unwrap());
    }

    #[test]
    fn crg_verdict_is_scale_invariant(y in matrix(3, 3, 1, 40), k in 1i64..=30) {
        let a = crg_density(&y).unwrap();
        let b = crg_density(&y.scale(&int(k))).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.cross_ratios, b.cross_ratios);
    }

    #[test]
    fn generators_fix_their_line_and_stretch(y in matrix(3, 3, 1, 25)) {
        let frame = build_frame(&block_omega(&y)).unwrap();
        for l in frame.letters() {
            let g = frame.generator(l);
            let c = frame.cross_ratio(l);
            let f = frame.fixed_direction(l.i).unwrap();
            let img = [g.get(0, 0) * &f[0] + g.get(0, 1) * &f[1], g.get(1, 0) * &f[0] + g.get(1, 1) * &f[1]];
            prop_assert_eq!(&img, &f);
            prop_assert_eq!(&g.det().unwrap(), c);
            prop_assert_eq!(g.trace().unwrap(), int(1) + c);
        }
    }

    #[test]
    fn word_charpoly_divides_path_charpoly(y in matrix(3, 3, 1, 12), w in word(6)) {
        let omega = block_omega(&y);
        let frame = build_frame(&omega).unwrap();
        let chi_s = charpoly2(&s_word_matrix(&w, &frame));
        let chi_f = f_gamma_charpoly(&omega, &word_to_path(&w, &build_graph(&omega)).unwrap()).unwrap();
        prop_assert!(chi_s.divides(&chi_f).unwrap());
        prop_assert_eq!(s_word_matrix(&w, &frame).det().unwrap(), word_determinant(&w, &frame));
    }

    #[test]
    fn spurs_do_not_change_f_gamma(w in word(4), pos in 0usize..64, pick in 0usize..6) {
        let omega = seed_system(pennerlab::curves::Surface::S06).unwrap().omega;
        let g = build_graph(&omega);
        let p = word_to_path(&w, &g).unwrap();
        let pos = pos % p.len();
        let nbrs: Vec<usize> = g.neighbors(p.vertices()[pos]).collect();
        let q = p.insert_spur(pos, nbrs[pick % nbrs.len()], &g).unwrap();
        prop_assert_eq!(f_gamma_charpoly(&omega, &p).unwrap(), f_gamma_charpoly(&omega, &q).unwrap());
    }

    #[test]
    fn word_matrices_reverse_composition(a in word(4), b in word(4)) {
        let frame = build_frame(&seed_system(pennerlab::curves::Surface::S13).unwrap().omega).unwrap();
        let ab = s_word_matrix(&a.concat(&b), &frame);
        prop_assert_eq!(ab, s_word_matrix(&b, &frame).mul(&s_word_matrix(&a, &frame)).unwrap());
        let id = s_word_matrix(&a.concat(&a.inverse()), &frame);
        prop_assert_eq!(id, ExactMatrix::identity(2));
    }

    #[test]
    fn penner_matrices_have_unit_determinant(w in word(3), k in 1u32..=4) {
        let omega = seed_system(pennerlab::curves::Surface::S06).unwrap().omega;
        let path = complete_path(&omega, &word_to_path(&w, &build_graph(&omega)).unwrap()).unwrap();
        let q = twist_matrices(&omega).unwrap();
        let spec = PennerWordSpec::new(path, k).unwrap();
        let m = word_matrix(&spec, &q).unwrap();
        prop_assert!(m.det().unwrap().is_one());
        prop_assert!(m.charpoly().unwrap().coeff(0).abs().is_one());
        if k <= 2 {
            prop_assert_eq!(m, word_matrix_by_products(&spec, &q).unwrap());
        }
    }

    #[test]
    fn stretch_grows_with_k(w in word(3)) {
        let omega = seed_system(pennerlab::curves::Surface::S06).unwrap().omega;
        let path = complete_path(&omega, &word_to_path(&w, &build_graph(&omega)).unwrap()).unwrap();
        let q = twist_matrices(&omega).unwrap();
        let mut last = None;
        for k in 1..=5 {
            let s = stretch_for_word(&PennerWordSpec::new(path.clone(), k).unwrap(), &q).unwrap();
            prop_assert!(s.dominant);
            if let Some(prev) = last {
                prop_assert!(s.lambda.re > prev);
            }
            last = Some(s.lambda.re);
        }
    }

    #[test]
    fn projections_are_idempotent(y in matrix(3, 3, 1, 20), i in 0usize..3, j in 3usize..6) {
        let omega = block_omega(&y);
        let p = projection_matrix(&omega, i, j).unwrap();
        prop_assert_eq!(p.mul(&p).unwrap(), p.clone());
        let q = projection_matrix(&omega, j, i).unwrap();
        prop_assert_eq!(q.mul(&q).unwrap(), q);
    }
}

#[test]
fn cross_ratio_chain_example() {
    let a = cross_ratio(&ExactMatrix::from_i64(&[[2, 3], [5, 6]])).unwrap();
    let b = cross_ratio(&ExactMatrix::from_i64(&[[1, 2], [4, 5]])).unwrap();
    assert_eq!((a.clone(), b.clone()), (ratio(4, 5), ratio(5, 8)));
    assert_eq!(a * b, ratio(1, 2));
}
