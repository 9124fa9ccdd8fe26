#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::OnceLock;

use serde_json::Value;

pub const EINSTEIN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/einstein.json");

/// Starts one service per test binary on an ephemeral port.
pub fn server() -> SocketAddr {
    static ADDR: OnceLock<SocketAddr> = OnceLock::new();
    *ADDR.get_or_init(|| {
        let std_listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        std_listener.set_nonblocking(true).unwrap();
        let addr = std_listener.local_addr().unwrap();
        std::thread::spawn(move || {
            let rt = tokio::runtime::Runtime::new().unwrap();
            rt.block_on(async {
                let listener = tokio::net::TcpListener::from_std(std_listener).unwrap();
                logiclab::server::serve_on(listener).await.unwrap();
            });
        });
        addr
    })
}

pub struct Reply {
    pub status: u16,
    pub body: String,
    pub headers: reqwest::header::HeaderMap,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap()
    }
}

pub fn send(method: reqwest::Method, path: &str, body: &str, origin: Option<&str>) -> Reply {
    let client = reqwest::blocking::Client::new();
    let mut req = client
        .request(method, format!("http://{}{path}", server()))
        .header("content-type", "application/json")
        .body(body.to_string());
    if let Some(o) = origin {
        req = req.header("origin", o);
    }
    let resp = req.send().unwrap();
    Reply {
        status: resp.status().as_u16(),
        headers: resp.headers().clone(),
        body: resp.text().unwrap(),
    }
}

pub fn post(endpoint: &str, body: &str) -> Reply {
    send(reqwest::Method::POST, &format!("/api/{endpoint}"), body, None)
}

pub fn cli(args: &[&str]) -> logiclab::CliOutput {
    logiclab::run_cli(std::iter::once("logiclab").chain(args.iter().copied()))
}

pub fn einstein_json() -> Value {
    serde_json::from_str(&std::fs::read_to_string(EINSTEIN).unwrap()).unwrap()
}

/// One checked-in parity case: the same request as an HTTP body and as CLI arguments.
pub struct GoldenCase {
    pub name: String,
    pub endpoint: String,
    pub body: Value,
    pub args: Vec<String>,
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Loads the cases, substituting the puzzle fixture for the `@einstein` marker.
pub fn golden_cases() -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(golden_dir().join("requests.json")).unwrap();
    let raw: Vec<Value> = serde_json::from_str(&text).unwrap();
    raw.into_iter()
        .map(|c| {
            let mut body = c["body"].clone();
            if body.get("spec") == Some(&Value::String("@einstein".into())) {
                body["spec"] = einstein_json();
            }
            let args = c["args"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| match a.as_str().unwrap() {
                    "@einstein" => EINSTEIN.to_string(),
                    s => s.to_string(),
                })
                .collect();
            GoldenCase {
                name: c["name"].as_str().unwrap().to_string(),
                endpoint: c["endpoint"].as_str().unwrap().to_string(),
                body,
                args,
            }
        })
        .collect()
}

/// Compares the HTTP body with the checked-in response and with the CLI's
/// `--json` output. Returns a description of the first mismatch.
pub fn check_golden(case: &GoldenCase, bless: bool) -> Result<(), String> {
    let reply = post(&case.endpoint, &case.body.to_string());
    if reply.status != 200 {
        return Err(format!("{}: HTTP {} {}", case.name, reply.status, reply.body));
    }
    let file = golden_dir().join("responses").join(format!("{}.json", case.name));
    if bless {
        std::fs::create_dir_all(file.parent().unwrap()).unwrap();
        std::fs::write(&file, format!("{}\n", reply.body)).unwrap();
    }
    let expected = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", case.name))?;
    if expected.trim_end() != reply.body {
        return Err(format!("{}: HTTP body differs from {}", case.name, file.display()));
    }
    let mut args: Vec<&str> = vec!["--json"];
    args.extend(case.args.iter().map(String::as_str));
    let out = cli(&args);
    let wrapped = format!("{{\"ok\":true,\"result\":{}}}", out.stdout.trim_end());
    if wrapped != reply.body {
        return Err(format!("{}: CLI output differs\n cli: {}\nhttp: {}", case.name, wrapped, reply.body));
    }
    Ok(())
}
