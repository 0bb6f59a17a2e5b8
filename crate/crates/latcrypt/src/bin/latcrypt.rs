use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latcrypt::channel::{self, add_awgn, trial_rng, SweepSpec};
use latcrypt::framefile::{Coords, FileHeader, FrameKind, FrameReader, FrameWriter};
use latcrypt::{keyfile, report};
use latcrypt_core::analysis::SchemeReport;
use latcrypt_core::cipher::pack::{bytes_per_frame, pack_frame, unpack_frame};
use latcrypt_core::cipher::{ceil_log2, keygen, CipherContext, SchemeParams};

/// Joint encryption, channel coding and modulation over QC-LDPC lattices.
#[derive(Parser)]
#[command(name = "latcrypt", version)]
struct Cli {
    /// Print extra detail to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key file.
    Keygen(KeygenArgs),
    /// Encrypt a file into ciphertext frames.
    Encrypt(EncryptArgs),
    /// Decrypt ciphertext frames or channel observations.
    Decrypt(DecryptArgs),
    /// Pass ciphertext frames through an AWGN channel.
    Channel(ChannelArgs),
    /// Monte-Carlo SER/FER sweep over VNR, written as CSV.
    Simulate(SimulateArgs),
    /// Key size, rates, expansion and attack costs.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct KeygenArgs {
    #[arg(long)]
    b: usize,
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    dv: usize,
    /// Permutation block size; defaults to b.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long = "L")]
    l: u32,
    /// Control-line width; defaults to 7*ceil(log2 n).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnFail {
    Abort,
    Skip,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Noise standard deviation of observation input; 0 rounds instead of
    /// decoding.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, value_enum, default_value = "abort")]
    on_fail: OnFail,
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
    vnr_db: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    key: PathBuf,
    /// `start:step:stop` in dB, or a single value.
    #[arg(long)]
    vnr_db: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to LATCRYPT_WORKERS or the core count.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Read the parameters from a key file.
    #[arg(long, conflicts_with_all = ["b", "n0", "dv", "q", "l", "d"])]
    key: Option<PathBuf>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    dv: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long = "L")]
    l: Option<u32>,
    #[arg(long)]
    d: Option<usize>,
    /// Print one JSON object instead of text.
    #[arg(long)]
    jsonl: bool,
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<latcrypt::Error> for Failure {
    fn from(e: latcrypt::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn make_params(b: usize, n0: usize, dv: usize, q: Option<usize>, l: u32, d: Option<usize>) -> SchemeParams {
    let d = d.unwrap_or(7 * ceil_log2((b * n0) as u128) as usize);
    SchemeParams {
        b,
        n0,
        dv,
        q: q.unwrap_or(b),
        l,
        d,
    }
}

fn load_context(path: &Path) -> anyhow::Result<CipherContext> {
    let key = keyfile::load(path).with_context(|| format!("reading key {}", path.display()))?;
    Ok(CipherContext::new(key)?)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn cmd_keygen(a: KeygenArgs) -> CliResult {
    let params = make_params(a.b, a.n0, a.dv, a.q, a.l, a.d);
    params.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let key = keygen(params, a.seed).map_err(anyhow::Error::from)?;
    keyfile::save(&a.output, &key)?;
    println!("key size: {} bits", key.bit_len());
    Ok(())
}

/// Read up to `buf.len()` bytes, stopping early only at end of input.
fn read_chunk<R: Read>(r: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(k) => filled += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

fn cmd_encrypt(a: EncryptArgs) -> CliResult {
    let ctx = load_context(&a.key)?;
    let p = *ctx.params();
    let mut input = open(&a.input)?;
    let header = FileHeader {
        kind: FrameKind::Cipher,
        digest: ctx.digest(),
        n: p.n() as u32,
    };
    let mut out = FrameWriter::new(create(&a.output)?, header)?;
    let mut session = ctx.session();
    let mut buf = vec![0u8; bytes_per_frame(p.n(), p.l)];
    loop {
        let len = read_chunk(&mut input, &mut buf).context("reading plaintext")?;
        if len == 0 {
            break;
        }
        let m = pack_frame(&buf[..len], p.n(), p.l).map_err(anyhow::Error::from)?;
        let j = session.counter();
        let ct = session.encrypt(&m).map_err(|e| anyhow!("frame {j}: {e}"))?;
        out.write_exact(ct.counter, len as u32, &ct.y)?;
    }
    out.finish()?;
    Ok(())
}

fn cmd_decrypt(a: DecryptArgs, verbose: bool) -> CliResult {
    let ctx = load_context(&a.key)?;
    let p = *ctx.params();
    let mut reader = FrameReader::new(open(&a.input)?)?;
    let header = *reader.header();
    if header.digest != ctx.digest() {
        return Err(anyhow!("input was produced under different parameters than the key").into());
    }
    if header.n as usize != p.n() {
        return Err(anyhow!("frame length {} does not match key (n = {})", header.n, p.n()).into());
    }
    if header.kind == FrameKind::Observation && a.sigma.is_none() {
        return Err(Failure::Usage("observation input needs --sigma".into()));
    }
    let per = bytes_per_frame(p.n(), p.l);
    let mut out = create(&a.output)?;
    let mut index = 0u64;
    while let Some(frame) = reader.next_frame()? {
        let len = frame.payload_len as usize;
        if len > per {
            return Err(anyhow!("frame {index}: payload length {len} exceeds {per}").into());
        }
        let result = match &frame.coords {
            Coords::Exact(y) => match a.sigma {
                Some(s) if s > 0.0 => {
                    let r: Vec<f64> = y.iter().map(|&v| v as f64).collect();
                    ctx.decrypt_joint_at(frame.counter, &r, s)
                }
                _ => ctx.decrypt_joint_exact(frame.counter, y),
            },
            Coords::Observed(r) => ctx.decrypt_joint_at(frame.counter, r, a.sigma.unwrap_or(0.0)),
        };
        let bytes = match result {
            Ok(m) => unpack_frame(&m, p.l, len).map_err(anyhow::Error::from)?,
            Err(e) => match a.on_fail {
                OnFail::Abort => return Err(anyhow!("frame {index} (counter {}): {e}", frame.counter).into()),
                OnFail::Skip => {
                    eprintln!("warning: frame {index} (counter {}): {e}; writing zeros", frame.counter);
                    vec![0u8; len]
                }
            },
        };
        out.write_all(&bytes).context("writing plaintext")?;
        if verbose {
            eprintln!("frame {index}: {len} bytes");
        }
        index += 1;
    }
    out.flush().context("writing plaintext")?;
    Ok(())
}

fn cmd_channel(a: ChannelArgs) -> CliResult {
    let ctx = load_context(&a.key)?;
    let sigma = match (a.sigma, a.vnr_db) {
        (Some(s), _) if s >= 0.0 && s.is_finite() => s,
        (Some(_), _) => return Err(Failure::Usage("--sigma must be finite and non-negative".into())),
        (None, Some(db)) => ctx.lattice().vnr_sigma(db),
        (None, None) => unreachable!("clap requires one of --sigma and --vnr-db"),
    };
    let mut reader = FrameReader::new(open(&a.input)?)?;
    let header = *reader.header();
    if header.kind != FrameKind::Cipher {
        return Err(anyhow!("channel input must be a ciphertext file").into());
    }
    let mut out = FrameWriter::new(
        create(&a.output)?,
        FileHeader {
            kind: FrameKind::Observation,
            ..header
        },
    )?;
    let mut index = 0u32;
    while let Some(frame) = reader.next_frame()? {
        let Coords::Exact(y) = &frame.coords else {
            unreachable!("ciphertext files hold integer frames")
        };
        let mut rng = trial_rng(a.seed, 0, index);
        out.write_observed(frame.counter, frame.payload_len, &add_awgn(y, sigma, &mut rng))?;
        index += 1;
    }
    out.finish()?;
    eprintln!("sigma = {sigma}");
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> CliResult {
    let spec = SweepSpec::parse_range(&a.vnr_db, a.trials, a.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let workers = match a.workers {
        Some(w) => Some(w),
        None => match std::env::var("LATCRYPT_WORKERS") {
            Ok(v) => Some(v.parse().map_err(|_| Failure::Usage(format!("LATCRYPT_WORKERS=`{v}` is not a count")))?),
            Err(_) => None,
        },
    };
    let ctx = load_context(&a.key)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| anyhow!("thread pool: {e}"))?;
    let rows = pool.install(|| {
        channel::run_sweep_with(&ctx, &spec, |r| {
            eprintln!("vnr {:>6.2} dB  ser {:.3e}  fer {:.3e}", r.vnr_db, r.ser, r.fer);
        })
    })?;
    match &a.output {
        Some(path) => {
            let mut w = create(path)?;
            channel::write_csv(&mut w, &rows)?;
            w.flush().context("writing CSV")?;
        }
        None => channel::write_csv(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> CliResult {
    let params = match &a.key {
        Some(path) => keyfile::load(path).with_context(|| format!("reading key {}", path.display()))?.params,
        None => match (a.b, a.n0, a.dv, a.l) {
            (Some(b), Some(n0), Some(dv), Some(l)) => make_params(b, n0, dv, a.q, l, a.d),
            _ => return Err(Failure::Usage("give --key or all of --b, --n0, --dv, --L".into())),
        },
    };
    if params.n() < 2 || params.q == 0 || params.l < 2 || params.n0 < 2 {
        return Err(Failure::Usage("parameters out of range".into()));
    }
    let r = SchemeReport::new(params);
    if a.jsonl {
        println!("{}", report::json_line(&r));
    } else {
        print!("{}", report::text(&r));
        println!();
        print!("{}", report::key_values(&r));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = cli.verbose;
    let result = match cli.command {
        Command::Keygen(a) => cmd_keygen(a),
        Command::Encrypt(a) => cmd_encrypt(a),
        Command::Decrypt(a) => cmd_decrypt(a, verbose),
        Command::Channel(a) => cmd_channel(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
