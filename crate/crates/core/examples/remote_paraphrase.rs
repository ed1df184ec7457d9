//! HTTP paraphrase client.
//!
//! Talks to `$BOTAUG_PARAPHRASE_URL` when set. Otherwise a local stub that
//! echoes the input with a suffix is started on a free port.

use std::thread;

use botaug::paraphrase::{paraphrase, ParaphraseRequest, RemoteProvider};
use serde_json::{json, Value};

fn start_stub() -> String {
    let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let url = format!("http://{}", server.server_addr().to_ip().unwrap());
    thread::spawn(move || {
        for mut req in server.incoming_requests() {
            let body = match req.url() {
                "/v1/health" => json!({"status": "ok", "model": "echo-stub"}),
                _ => {
                    let mut raw = String::new();
                    req.as_reader().read_to_string(&mut raw).unwrap();
                    let v: Value = serde_json::from_str(&raw).unwrap();
                    let text = v["text"].as_str().unwrap_or_default();
                    let n = v["num_return"].as_u64().unwrap_or(1);
                    let out: Vec<String> = (1..=n).map(|i| format!("{text} (variant {i})")).collect();
                    json!({"paraphrases": out, "model": "echo-stub"})
                }
            };
            let header = tiny_http::Header::from_bytes("Content-Type", "application/json").unwrap();
            let _ = req.respond(tiny_http::Response::from_string(body.to_string()).with_header(header));
        }
    });
    url
}

fn main() {
    let provider = RemoteProvider::from_env().unwrap_or_else(|| RemoteProvider::new(start_stub()));
    println!("service: {}", provider.base_url());
    match provider.health() {
        Ok(h) => println!("health: {} ({})", h.status, h.model),
        Err(e) => println!("health: {e}"),
    }

    let req = ParaphraseRequest::new("What files induce the most issues?", 3).unwrap();
    match paraphrase(&provider, &req) {
        Ok(r) => r.paraphrases.iter().for_each(|p| println!("  {p}")),
        Err(e) => println!("failed: {e}"),
    }
}
