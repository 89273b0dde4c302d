use elltor::params::*;
use elltor::series::*;
use elltor::special::*;
use elltor::fock::*;
use elltor::partition::Partition;
use num::One;
fn main() {
    let pr = ParamPoint::default_point();
    let alg = ModeAlgebra::level_1n(&pr, 0, "p");
    let vt = PsiRelation::PsiPsiPlus.table(4, 2);
    let x = Monomial::var(&vt, "x", QQ::one());
    let one = Monomial::constant(&vt, QQ::one());
    let p_mono = Monomial::var(&vt, "p", QQ::one());
    let qt = pr.q()/pr.t();
    let tq = pr.t()/pr.q();
    let pstar = p_mono.scale(&qt);
    let lam = Partition::empty();
    let cutoff = 14;
    let l = build_psi_tilde(&alg, &vt, &lam, &x.inv(), cutoff).unwrap();
    let r = build_current(&alg, &vt, CurrentKind::PsiPlus, &Monomial::constant(&vt, pr.tq_quarter_pow(-1)), &one, cutoff).unwrap();
    let num = ope_scalar(&alg, &vt, &l, &r).unwrap();
    let den = ope_scalar(&alg, &vt, &r, &l).unwrap();
    let small = VarTable::builder().range("p", -2, 2).spectral("x", 2).build();
    // closed num: prod_k (1-(q/t) x p*^k)/(1-x p*^k), k = 0..12
    let mut m = vt.one();
    for k in 0..=12 {
        let pk = pstar.pow(k);
        m = m.mul(&vt.one().sub(&x.scale(&qt).mul(&pk).to_series(&vt)));
        m = m.mul(&linear_inv_region(&vt, &x.mul(&pk), Region::Small).unwrap());
    }
    match num.first_mismatch(&m, &small) {
        Some((e,a,b)) => println!("num vs closed differ {:?}: {} vs {}", e, a, b),
        None => println!("num = closed"),
    }
    // closed den: prod_k (1-p*^{k+1}/x)/(1-(t/q) p*^{k+1}/x) with inverse halves SMALL
    let mut d = vt.one();
    for k in 0..=12 {
        let pk1 = pstar.pow(k+1).mul(&x.inv());
        d = d.mul(&vt.one().sub(&pk1.to_series(&vt)));
        d = d.mul(&linear_inv_region(&vt, &pk1.scale(&tq), Region::Small).unwrap());
    }
    match den.first_mismatch(&d, &small) {
        Some((e,a,b)) => println!("den vs closed differ {:?}: {} vs {}", e, a, b),
        None => println!("den = closed"),
    }
}
