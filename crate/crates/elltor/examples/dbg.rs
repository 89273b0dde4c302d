use elltor::params::*;
use elltor::series::*;
use elltor::special::*;
use elltor::nekrasov::*;
use elltor::fock::*;
use elltor::partition::Partition;
use num::One;
fn main() {
    let pr = ParamPoint::default_point();
    let alg = ModeAlgebra::level_1n(&pr, 0, "p");
    let vt = PsiRelation::PsiPsiPlus.table(4, 2);
    println!("{:?}", vt.specs().iter().map(|v|(v.name.clone(),v.lo,v.hi)).collect::<Vec<_>>());
    let x = Monomial::var(&vt, "x", QQ::one());
    let one = Monomial::constant(&vt, QQ::one());
    let p_mono = Monomial::var(&vt, "p", QQ::one());
    let lam = Partition::empty();
    let cutoff = 14;
    let l = build_psi_tilde(&alg, &vt, &lam, &x.inv(), cutoff).unwrap();
    let r = build_current(&alg, &vt, CurrentKind::PsiPlus, &Monomial::constant(&vt, pr.tq_quarter_pow(-1)), &one, cutoff).unwrap();
    let num = ope_scalar(&alg, &vt, &l, &r).unwrap();
    let den = ope_scalar(&alg, &vt, &r, &l).unwrap();
    let ratio = num.div(&den).unwrap();
    let p_star = PochBase::scaled_nome(&vt, "p", alg.p_star_scale());
    let arg = p_mono.scale(&alg.p_star_scale()).mul(&x.inv());
    let b = rep_b_plus(&vt, &lam, &arg, &pr, &p_star).unwrap();
    let small = VarTable::builder().range("p", -2, 2).spectral("x", 2).build();
    println!("num = {:?}", num.restrict(&small));
    println!("den = {:?}", den.restrict(&small));
    println!("b     = {:?}", b.restrict(&small));
    println!("ratio = {:?}", ratio.restrict(&small));
    let bden = b.mul(&den);
    match num.first_mismatch(&bden, &small) {
        Some((e,a,c)) => println!("num vs b*den differ at {:?}: {} vs {}", e, a, c),
        None => println!("num = b*den on check"),
    }
}
