use std::sync::Arc;
use std::thread;

use ecorec_cli::server::{router, App};
use ecorec_core::{bundled_catalog, bundled_dataset, MemoryStore};
use serde_json::{json, Value};

struct Service {
    base: String,
    agent: ureq::Agent,
}

impl Service {
    fn start() -> Service {
        let app = Arc::new(App::new(bundled_dataset(), bundled_catalog(), MemoryStore::default()));
        let runtime = tokio::runtime::Runtime::new().unwrap();
        let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        thread::spawn(move || runtime.block_on(async move { axum::serve(listener, router(app)).await }));
        let agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
        Service { base, agent }
    }

    fn get(&self, path: &str) -> (u16, Value) {
        let mut r = self.agent.get(&format!("{}{path}", self.base)).call().unwrap();
        (r.status().as_u16(), r.body_mut().read_json().unwrap())
    }

    fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let mut r = self.agent.post(&format!("{}{path}", self.base)).send_json(body).unwrap();
        (r.status().as_u16(), r.body_mut().read_json().unwrap())
    }

    fn post_raw(&self, path: &str, body: &str) -> (u16, Value) {
        let mut r = self.agent.post(&format!("{}{path}", self.base)).send(body).unwrap();
        (r.status().as_u16(), r.body_mut().read_json().unwrap())
    }

    fn new_session(&self) -> String {
        let (status, v) = self.post_raw("/sessions", "");
        assert_eq!(status, 201);
        v["payload"]["id"].as_str().unwrap().to_string()
    }
}

#[test]
fn full_flow_over_http() {
    let svc = Service::start();
    let id = svc.new_session();

    let (status, v) = svc.post(&format!("/sessions/{id}/country"), json!({"name": "mexico"}));
    assert_eq!(status, 404);
    assert_eq!(v["message"], "Country not found. Remember to type with first letter capital.");
    assert_eq!(v["code"], "CountryNotFound");

    let (status, v) = svc.post(&format!("/sessions/{id}/country"), json!({"name": "Mexico"}));
    assert_eq!(status, 200);
    assert_eq!(v["payload"]["standing"]["standing"], "FIRST");
    assert_eq!(v["payload"]["state"], "AwaitingYesNo");

    let (status, v) = svc.post(&format!("/sessions/{id}/answer"), json!({"reply": "no"}));
    assert_eq!(status, 422);
    assert_eq!(v["message"], "Please reply with either YES or NO");

    let (_, v) = svc.post(&format!("/sessions/{id}/answer"), json!({"reply": "YES"}));
    assert_eq!(v["message"], "How difficult would you like your recommendations to be?");

    let (status, v) = svc.post(&format!("/sessions/{id}/difficulty"), json!({"reply": "yeet"}));
    assert_eq!(status, 422);
    assert_eq!(v["message"], "Will not give any recommendations");

    let (_, v) = svc.post(&format!("/sessions/{id}/difficulty"), json!({"reply": "EASY"}));
    assert_eq!(v["payload"]["count"], 4);
    for i in 0..4 {
        let (status, _) = svc.post(&format!("/sessions/{id}/tasks/{i}/mark"), json!({"mark": "O"}));
        assert_eq!(status, 200);
    }
    let (_, v) = svc.get(&format!("/sessions/{id}/points"));
    assert_eq!(v["payload"]["total_points"], 4);

    let (status, v) = svc.post(&format!("/sessions/{id}/tasks/9/mark"), json!({"mark": "O"}));
    assert_eq!(status, 404);
    assert_eq!(v["code"], "IndexOutOfRange");
    let (status, _) = svc.post(&format!("/sessions/{id}/tasks/0/mark"), json!({"mark": "done"}));
    assert_eq!(status, 422);

    let (_, v) = svc.get(&format!("/sessions/{id}/tasks"));
    assert_eq!(v["payload"]["tasks"].as_array().unwrap().len(), 4);
    assert_eq!(v["payload"]["tasks"][0]["awarded"], 1);
}

#[test]
fn no_terminates_and_blocks_further_steps() {
    let svc = Service::start();
    let id = svc.new_session();
    svc.post(&format!("/sessions/{id}/country"), json!({"name": "Congo"}));
    let (_, v) = svc.post(&format!("/sessions/{id}/answer"), json!({"reply": "NO"}));
    assert_eq!(v["message"], "Thank you for using our app! Come again soon :)");
    assert_eq!(v["payload"]["state"], "Terminated");
    let (status, v) = svc.post(&format!("/sessions/{id}/difficulty"), json!({"reply": "EASY"}));
    assert_eq!(status, 409);
    assert_eq!(v["code"], "WrongState");
}

#[test]
fn error_envelopes() {
    let svc = Service::start();
    let (status, v) = svc.get("/sessions/nope");
    assert_eq!(status, 404);
    assert_eq!(v["code"], "UnknownSession");
    assert_eq!(v["status"], "error");

    let (status, v) = svc.get("/sessions/bad%20id");
    assert_eq!(status, 404);
    assert_eq!(v["code"], "UnknownSession");

    let id = svc.new_session();
    let (status, v) = svc.post_raw(&format!("/sessions/{id}/country"), "{not json");
    assert_eq!(status, 400);
    assert_eq!(v["code"], "BadRequest");

    let (status, v) = svc.get("/no/such/path");
    assert_eq!(status, 404);
    assert_eq!(v["code"], "NotFound");

    let (status, v) = svc.get("/stats/chisq");
    assert_eq!(status, 405);
    assert_eq!(v["code"], "MethodNotAllowed");
}

#[test]
fn stats_endpoints() {
    let svc = Service::start();
    let (status, v) = svc.get("/countries/Bulgaria");
    assert_eq!(status, 200);
    assert_eq!(v["payload"]["mismanaged_share_pct"], 31.0);

    let (status, v) = svc.get("/stats/summary?metric=waste_per_capita");
    assert_eq!(status, 200);
    assert_eq!(v["payload"]["count"], 28);
    let (status, v) = svc.get("/stats/summary?metric=height");
    assert_eq!(status, 400);
    assert_eq!(v["code"], "UnknownMetric");

    let table = include_str!("../../core/data/stance_by_region.csv");
    let (status, v) = svc.post_raw("/stats/chisq", table);
    assert_eq!(status, 200);
    let stat = v["payload"]["statistic"].as_f64().unwrap();
    assert!((stat - 31.400668147183826).abs() < 1e-12);
    assert_eq!(v["payload"]["p_display"], "p < .00001");
    assert_eq!(v["payload"]["significant_at_5pct"], true);

    let (status, _) = svc.post_raw("/stats/chisq", ",a\nr,1\n");
    assert_eq!(status, 400);
}
