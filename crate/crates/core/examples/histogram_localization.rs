//! Grid (histogram) filter: integer-cell motion with blur, range likelihoods.

use navsim::localization::{hf_predict, hf_update, HistogramBelief};
use navsim::navcore::RngStream;

fn main() -> navsim::Result<()> {
    let landmarks = [(2.0, 2.0), (8.0, 3.0), (5.0, 9.0)];
    let mut rng = RngStream::new(11);
    let mut belief = HistogramBelief::uniform(20, 20, 0.5, (0.0, 0.0))?;
    // robot walks diagonally one cell per step from (1.25, 1.25)
    let mut truth: (f64, f64) = (1.25, 1.25);
    for step in 0..12 {
        if step > 0 {
            belief = hf_predict(&belief, (1, 1), 0.5)?;
            truth = (truth.0 + 0.5, truth.1 + 0.5);
        }
        let z: Vec<((f64, f64), f64)> = landmarks
            .iter()
            .map(|&lm| {
                let r = (lm.0 - truth.0).hypot(lm.1 - truth.1);
                Ok((lm, rng.gaussian(r, 0.3)?))
            })
            .collect::<navsim::Result<_>>()?;
        belief = hf_update(&belief, &z, 0.3)?;
        let (ix, iy) = belief.argmax();
        let m = belief.mean();
        println!(
            "step {step:2}  truth=({:.2},{:.2})  mean=({:.2},{:.2})  mode cell=({ix},{iy}) p={:.3}",
            truth.0,
            truth.1,
            m.0,
            m.1,
            belief.get(ix, iy)
        );
    }
    Ok(())
}
