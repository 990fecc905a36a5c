async function t(t,r,e){let o;for(let a=0;a<r;a++){try{const r=await t();if(r.status>=500){throw new Error("server error "+r.status)}return r}catch(t){o=t;await new Promise(t=>setTimeout(t,e*Math.pow(2,a)))}}throw o}
