from fastapi import FastAPI, HTTPException
from pydantic import BaseModel
from typing import Any, Dict, Literal, Optional
import uvicorn
from termcolor import cprint
import analysis
import zetacore
from cli import CHECKERS
from settings import current

app = FastAPI(title="Pro-isomorphic Zeta Server")


class ZetaRequest(BaseModel):
    m: int
    n: int
    format: Literal["text", "latex", "json"] = "text"


class AbscissaRequest(BaseModel):
    m: int
    n: int


class VerifyRequest(BaseModel):
    claim: Literal["fn-eq", "dstar", "oracle", "relations", "convexity"]
    m: int
    n: int = 2
    depth: Optional[int] = None


class QueryResponse(BaseModel):
    query: Dict[str, Any]
    result: Any
    # Only verification endpoints fill this in
    pass_: Optional[bool] = None

    def payload(self) -> Dict[str, Any]:
        body = {"query": self.query, "result": self.result}
        if self.pass_ is not None:
            body["pass"] = self.pass_
        return body


def _fail(e: Exception, what: str):
    if isinstance(e, ValueError):
        cprint(f"Rejected {what}: {str(e)}", "yellow")
        raise HTTPException(status_code=422, detail=str(e))
    cprint(f"Error processing {what}: {str(e)}", "red")
    raise HTTPException(status_code=500, detail=str(e))


@app.post("/zeta")
async def get_zeta(request: ZetaRequest):
    try:
        cprint(f"Received zeta request for (m,n)=({request.m},{request.n})", "blue")
        zeta = zetacore.local_zeta(request.m, request.n)
        if request.format == "json":
            result = zeta.to_json_obj()
        elif request.format == "latex":
            result = zeta.to_latex()
        else:
            result = zeta.to_text()
        cprint(f"Zeta function has {len(zeta.numerator)} numerator terms", "green")
        return QueryResponse(query=request.model_dump(), result=result).payload()
    except Exception as e:
        _fail(e, "zeta request")


@app.post("/abscissa")
async def get_abscissa(request: AbscissaRequest):
    try:
        cprint(f"Received abscissa request for (m,n)=({request.m},{request.n})", "blue")
        result = analysis.abscissa(request.m, request.n)
        return QueryResponse(query=request.model_dump(), result=result.to_json_obj()).payload()
    except Exception as e:
        _fail(e, "abscissa request")


@app.post("/verify")
async def verify(request: VerifyRequest):
    try:
        cprint(f"Verifying {request.claim} at (m,n)=({request.m},{request.n})", "blue")
        depth = request.depth if request.depth is not None else current().default_depth
        passed, result, _ = CHECKERS[request.claim](request.m, request.n, depth)
        cprint(f"{request.claim}: {'pass' if passed else 'FAIL'}", "green" if passed else "red")
        return QueryResponse(query=request.model_dump(), result=result, pass_=passed).payload()
    except Exception as e:
        _fail(e, "verification")


@app.get("/params/{m}/{n}")
async def get_params(m: int, n: int):
    try:
        return zetacore.zeta_parameters(m, n).model_dump(mode="json")
    except Exception as e:
        _fail(e, "parameter request")


if __name__ == "__main__":
    settings = current()
    cprint(f"Starting Zeta Server on port {settings.server_port}...", "green")
    uvicorn.run(app, host=settings.server_host, port=settings.server_port)
