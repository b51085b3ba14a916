//! Closed-form posterior updates for each belief family.

use seedrl::beliefs::{DirichletBelief, FiniteScenarioBelief, GaussianVectorBelief, Scale};

fn main() -> seedrl::Result<()> {
    let mut normal = GaussianVectorBelief::diagonal(vec![0.0], vec![1.0], 1.0, Scale::Normal)?;
    normal.update_normal(0, 2.0)?;
    println!("normal: N(0, 1) prior, unit noise, r = 2 -> mean {:.4}, variance {:.4}", normal.mean()[0], normal.variance(0));

    let mut lognormal = GaussianVectorBelief::diagonal(vec![0.0], vec![4.0], 0.01, Scale::Lognormal)?;
    lognormal.update_lognormal(0, 1.0)?;
    println!(
        "lognormal: ln θ ~ N(0, 4), σ² = 0.01, r = 1 -> mean {:.7}, variance {:.7}",
        lognormal.mean()[0],
        lognormal.variance(0)
    );

    let mut dirichlet = DirichletBelief::uniform(2, 1, 1.0)?;
    dirichlet.update(0, 0, 1)?;
    println!("dirichlet: α(0,0,·) = {:?} after one transition to state 1", dirichlet.row(0, 0));

    let n = 10.0;
    let mut scenarios = FiniteScenarioBelief::new(vec![vec![n, -n], vec![-n, n]], vec![0.5, 0.5])?;
    scenarios.update(None, -1.0)?;
    println!("scenario: after an interior edge p = {:?}", scenarios.probabilities());
    scenarios.update(Some(0), n)?;
    println!("scenario: after the left edge pays {n} p = {:?}", scenarios.probabilities());
    Ok(())
}
