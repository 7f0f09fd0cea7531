use metord::io::write_metric_order;
use metord::mvf::{
    d_pred, proj_ceq, proj_dceq, proj_density_witness, proj_distance, proj_phi, valuation, value_order_export,
    Magnitude, ProjPoint, TruncSeries,
};
use metord::rational::zero;
use metord::MetricSpace;

use crate::report::{Check, Report};
use crate::{Failure, MvfCommand, Outcome, Output};

fn series(s: &str) -> Result<TruncSeries, Failure> {
    s.parse().map_err(|e: metord::Error| Failure::Usage(format!("`{s}`: {e}")))
}

fn point(s: &str) -> Result<ProjPoint, Failure> {
    s.parse().map_err(|e: metord::Error| Failure::Usage(format!("`{s}`: {e}")))
}

pub fn run(command: String, c: &MvfCommand) -> Outcome {
    let mut r = Report::new(command);
    match c {
        MvfCommand::Dpred { x, y } => {
            let (x, y) = (series(x)?, series(y)?);
            r.artifact("valuation_x", [valuation(&x)]);
            r.artifact("valuation_y", [valuation(&y)]);
            r.artifact("D", [d_pred(&x, &y)?]);
        }
        MvfCommand::Valorder { series: list } => {
            let elems = list.iter().map(|s| series(s)).collect::<Result<Vec<_>, _>>()?;
            let (m, pos) = value_order_export(&elems)?;
            for (s, p) in list.iter().zip(&pos) {
                r.artifact("element", [s.as_str(), m.name(*p)]);
            }
            for line in write_metric_order(&m).lines() {
                r.artifact("structure", [line]);
            }
            r.check(Check::eq("mlo", &m.mlo_defect(), &zero()));
            r.check(Check::eq("um", &m.ultrametric_defect(), &zero()));
        }
        MvfCommand::Projdist { p, q } => {
            r.artifact("d", [proj_distance(&point(p)?, &point(q)?)?]);
        }
        MvfCommand::Ceq { p, q, r: s } => {
            let (p, q, s) = (point(p)?, point(q)?, point(s)?);
            let dceq = proj_dceq(&p, &q, &s)?;
            let phi = proj_phi(&p, &q, &s)?;
            r.artifact("ceq", [proj_ceq(&p, &q, &s)?]);
            r.artifact("dceq", [&dceq]);
            r.artifact("phi", [&phi]);
            r.check(Check::text("phi_dominates_dceq", phi.to_string(), ">=", dceq.to_string(), phi >= dceq));
        }
        MvfCommand::Density { p, q, target } => {
            let (p, q) = (point(p)?, point(q)?);
            let w = proj_density_witness(&p, &q, target)?;
            r.artifact("witness", [&w]);
            let got = proj_distance(&p, &w)?;
            let want = Magnitude::Exp(target.clone());
            r.check(Check::text("distance", got.to_string(), "=", want.to_string(), got == want));
            r.check(Check::holds("between", proj_ceq(&p, &w, &q)?));
        }
    }
    Ok(Output::Report(r))
}
