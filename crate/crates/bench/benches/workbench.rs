//! Wall-clock coverage of the workbench's hot paths: Adem closure, the
//! decomposition search, Tor over an exterior algebra, the nilpotent
//! filtration, and simplicial cohomology of a product.

use criterion::{criterion_group, criterion_main, Criterion};

use steem::homological::{lambda, tor};
use steem::simplicial::{cohomology, make_space};
use steem::steenrod::{admissible_basis, decompose_sq2n_sq2n, multiply, SteenrodElement};
use steem::unstable::catalog::make_catalog;
use steem::unstable::filtration::nilpotent_filtration;

/// Multiply every pair of admissible monomials of total degree 12.
fn adem_closure(c: &mut Criterion) {
    c.bench_function("adem closure deg 12", |b| {
        b.iter(|| {
            let mut count = 0usize;
            for a in 0..=12u32 {
                for x in admissible_basis(a) {
                    for y in admissible_basis(12 - a) {
                        let p = multiply(
                            &SteenrodElement::from_monomial(x.clone()),
                            &SteenrodElement::from_monomial(y),
                        );
                        count += p.terms().len();
                    }
                }
            }
            count
        })
    });
}

fn decomposition_search(c: &mut Criterion) {
    c.bench_function("decompose Sq4 Sq4 over A(2)", |b| {
        b.iter(|| decompose_sq2n_sq2n(2, 8).unwrap())
    });
}

fn tor_exterior(c: &mut Criterion) {
    c.bench_function("tor Lambda(2) s<=6 t<=24", |b| {
        let alg = lambda(2, 24);
        let triv = alg.trivial_module();
        b.iter(|| tor(&alg, &triv, &triv, 6, 24))
    });
}

fn filtration_h(c: &mut Criterion) {
    c.bench_function("nilpotent filtration H@16", |b| {
        let m = make_catalog("H", 16).unwrap();
        b.iter(|| nilpotent_filtration(&m).unwrap())
    });
}

fn torus_cohomology(c: &mut Criterion) {
    c.bench_function("cohomology of S1 x S1 through degree 2", |b| {
        let t2 = make_space("prod(S1,S1)", 3).unwrap();
        b.iter(|| cohomology(&t2, 2))
    });
}

criterion_group!(
    benches,
    adem_closure,
    decomposition_search,
    tor_exterior,
    filtration_h,
    torus_cohomology
);
criterion_main!(benches);
