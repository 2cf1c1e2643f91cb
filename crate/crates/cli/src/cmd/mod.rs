pub mod eqv;
pub mod freemon;
pub mod gms;
pub mod semirigid;
pub mod zcong;
pub mod zigzag;

use crate::report::{Inputs, Outcome};
use crate::CliError;

pub type CmdResult = Result<(Outcome, Inputs), CliError>;
