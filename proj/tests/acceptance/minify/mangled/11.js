function*n(n,o){let t=[];for(const e of n){t.push(e);if(t.length===o){yield t;t=[]}}if(t.length>0){yield t}}function o(o,t){const e=[];for(const f of n(o,t)){e.push(f.reduce((n,o)=>n+o,0))}return e}
