//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    analyze, difference_plane, diffusion_experiment, key_sensitivity_experiment,
    noise_robustness_experiment,
};
use crate::cipher::{decrypt_image, encrypt_image, EncryptOptions, PlaneImage};
use crate::error::Error;
use crate::imageio::{
    is_container, load_container, read_container, read_image, save_container, save_image,
};
use crate::keyschedule::Key256;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lsic", version, about = "Latin square image cipher")]
pub struct Cli {
    /// Worker threads for tile processing (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct KeyArg {
    /// 256-bit key as 64 hex characters.
    #[arg(long)]
    pub key: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a fresh random key as hex.
    Keygen,
    /// Encrypt a PGM/PPM image into an LSIC container.
    Encrypt {
        #[command(flatten)]
        key: KeyArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Disable LSB noise embedding (deterministic output).
        #[arg(long)]
        no_noise: bool,
        /// Seed the noise bit-plane instead of using OS entropy.
        #[arg(long, conflicts_with = "no_noise")]
        noise_seed: Option<u64>,
    },
    /// Decrypt an LSIC container into a PGM/PPM image.
    Decrypt {
        #[command(flatten)]
        key: KeyArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Entropy, adjacent-pixel correlation and histogram; NPCR/UACI with --pair.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
        /// Write |in - pair| as PGM/PPM.
        #[arg(long, requires = "pair")]
        diff_out: Option<PathBuf>,
    },
    /// NPCR/UACI between ciphertexts of an image and a one-pixel variant.
    Diffuse {
        #[command(flatten)]
        key: KeyArg,
        #[arg(long = "in")]
        input: PathBuf,
        /// Pixel as `row,col`.
        #[arg(long, value_parser = parse_pixel)]
        pixel: (usize, usize),
        #[arg(long, default_value_t = 1)]
        delta: u8,
        #[arg(long)]
        diff_out: Option<PathBuf>,
    },
    /// Ciphertext change and wrong-key decryption for a one-bit key flip.
    Keysense {
        #[command(flatten)]
        key: KeyArg,
        #[arg(long = "in")]
        input: PathBuf,
        /// Bit index 0..256, counted from the first hex digit.
        #[arg(long, default_value_t = 255)]
        bit: usize,
    },
    /// Decryption damage from corrupting a fraction of ciphertext bytes.
    Noisetest {
        #[command(flatten)]
        key: KeyArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        diff_out: Option<PathBuf>,
    },
}

fn parse_pixel(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(',')
        .ok_or_else(|| format!("expected row,col; got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(r)?, parse(c)?))
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(path: &Path, e: Error) -> Self {
        Failure::Data(format!("{}: {e}", path.display()))
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn parse_key(hex: &str) -> std::result::Result<Key256, Failure> {
    Key256::from_hex(hex).map_err(|e| Failure::Usage(e.to_string()))
}

/// Reads a PGM/PPM image, or an LSIC container viewed as its padded planes.
fn load_any(path: &Path) -> std::result::Result<PlaneImage, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::data(path, e.into()))?;
    if is_container(&bytes) {
        let ct = read_container(&bytes).map_err(|e| Failure::data(path, e))?;
        PlaneImage::new(ct.padded_width(), ct.padded_height(), ct.planes().to_vec())
            .map_err(|e| Failure::data(path, e))
    } else {
        read_image(&bytes).map_err(|e| Failure::data(path, e))
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> CmdResult {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Data(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| Failure::Data(e.to_string()))
}

fn save_diff(path: &Option<PathBuf>, img: &PlaneImage) -> CmdResult {
    if let Some(p) = path {
        save_image(p, img).map_err(|e| Failure::data(p, e))?;
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Keygen => {
            let key = Key256::generate().map_err(|e| Failure::Data(e.to_string()))?;
            writeln!(out, "{}", key.to_hex()).map_err(|e| Failure::Data(e.to_string()))
        }
        Command::Encrypt {
            key,
            input,
            output,
            no_noise,
            noise_seed,
        } => {
            let key = parse_key(&key.key)?;
            let img = load_any(&input)?;
            let opts = EncryptOptions {
                embed_noise: !no_noise,
                noise_seed,
            };
            let ct = encrypt_image(&img, &key, &opts).map_err(|e| Failure::data(&input, e))?;
            save_container(&output, &ct).map_err(|e| Failure::data(&output, e))
        }
        Command::Decrypt { key, input, output } => {
            let key = parse_key(&key.key)?;
            let ct = load_container(&input).map_err(|e| Failure::data(&input, e))?;
            let img = decrypt_image(&ct, &key).map_err(|e| Failure::data(&input, e))?;
            save_image(&output, &img).map_err(|e| Failure::data(&output, e))
        }
        Command::Analyze {
            input,
            pair,
            diff_out,
        } => {
            let img = load_any(&input)?;
            let other = pair.as_deref().map(load_any).transpose()?;
            let report = analyze(&img, other.as_ref()).map_err(|e| Failure::data(&input, e))?;
            if let Some(o) = &other {
                let planes = img
                    .planes()
                    .iter()
                    .zip(o.planes())
                    .map(|(a, b)| difference_plane(a, b))
                    .collect::<crate::Result<Vec<_>>>()
                    .and_then(|p| PlaneImage::new(img.width(), img.height(), p))
                    .map_err(|e| Failure::data(&input, e))?;
                save_diff(&diff_out, &planes)?;
            }
            print_json(out, &report)
        }
        Command::Diffuse {
            key,
            input,
            pixel,
            delta,
            diff_out,
        } => {
            let key = parse_key(&key.key)?;
            let img = load_any(&input)?;
            let report = diffusion_experiment(&img, &key, pixel, delta).map_err(|e| match e {
                Error::InvalidArgument(m) => Failure::Usage(m),
                e => Failure::data(&input, e),
            })?;
            save_diff(&diff_out, &report.difference)?;
            print_json(out, &report)
        }
        Command::Keysense { key, input, bit } => {
            let key = parse_key(&key.key)?;
            if bit >= 256 {
                return Err(Failure::Usage(format!("bit {bit} out of range 0..256")));
            }
            let img = load_any(&input)?;
            let report = key_sensitivity_experiment(&img, &key, bit)
                .map_err(|e| Failure::data(&input, e))?;
            print_json(out, &report)
        }
        Command::Noisetest {
            key,
            input,
            ratio,
            seed,
            diff_out,
        } => {
            let key = parse_key(&key.key)?;
            if !(0.0..=1.0).contains(&ratio) {
                return Err(Failure::Usage(format!("ratio {ratio} outside [0, 1]")));
            }
            let img = load_any(&input)?;
            let report = noise_robustness_experiment(&img, &key, ratio, seed)
                .map_err(|e| Failure::data(&input, e))?;
            save_diff(&diff_out, &report.difference)?;
            print_json(out, &report)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    // buffered so the command can run inside a dedicated pool
    let mut buf = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &mut buf)),
            Err(e) => Err(Failure::Data(e.to_string())),
        },
        None => execute(cli.command, &mut buf),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DATA
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_parser() {
        assert_eq!(parse_pixel("3,4"), Ok((3, 4)));
        assert!(parse_pixel("3").is_err());
        assert!(parse_pixel("a,1").is_err());
    }

    #[test]
    fn bad_key_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            ["lsic", "decrypt", "--key", "abc", "--in", "x", "--out", "y"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["lsic", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["lsic", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
